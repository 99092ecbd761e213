/** Wire types mirroring the session service JSON. The client renders these
 * verbatim; it never computes rewards or beliefs on its own. */

export interface PresetInfo {
  name: string;
  row_labels: string[];
  column_labels: string[];
  alpha: number;
  horizon: number;
  model: string;
}

export interface LeaderAction {
  index: number;
  label: string;
}

export interface HistoryEntry {
  round: number;
  row: number;
  row_label: string;
  column: number;
  column_label: string;
  reward: number;
  declared_learned: boolean | null;
  note?: string;
}

export type Phase = 'AwaitingHuman' | 'AwaitingLearnedDeclaration' | 'Finished';

export interface SessionView {
  id: string;
  phase: Phase;
  round: number;
  horizon: number;
  model: string;
  planner: string;
  reveal_mode: string;
  row_labels: string[];
  column_labels: string[];
  cumulative_reward: number;
  history: HistoryEntry[];
  leader_action: LeaderAction | null;
  revealed_rows: Record<string, number[]>;
  outcome?: HistoryEntry;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  phase: string | null;
}

export interface CreateSessionRequest {
  preset?: string;
  planner: string;
  reveal_mode?: string;
  model?: string;
}
