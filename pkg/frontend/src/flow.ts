import { ApiClient, ApiError } from './api.js';
import type { HistoryEntry, PresetInfo, SessionView } from './types.js';

export type Screen = 'setup' | 'play' | 'summary';

export interface FlowState {
  screen: Screen;
  presets: PresetInfo[];
  view: SessionView | null;
  lastOutcome: HistoryEntry | null;
  banner: string | null;
  busy: boolean;
}

/** Screen state machine: setup -> play -> summary.
 *
 * Every user interaction maps to exactly one API call. Phase conflicts
 * never fork client state: the server snapshot is re-fetched and rendered
 * as-is. Network failures surface as a banner and leave the last good
 * snapshot on screen.
 */
export class GameFlow {
  private state: FlowState = {
    screen: 'setup',
    presets: [],
    view: null,
    lastOutcome: null,
    banner: null,
    busy: false,
  };

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (state: FlowState) => void = () => {},
  ) {}

  snapshot(): FlowState {
    return { ...this.state };
  }

  private set(partial: Partial<FlowState>): void {
    this.state = { ...this.state, ...partial };
    this.onChange(this.snapshot());
  }

  private apply(view: SessionView): void {
    this.set({
      view,
      lastOutcome: view.outcome ?? this.state.lastOutcome,
      screen: view.phase === 'Finished' ? 'summary' : 'play',
      banner: null,
    });
  }

  private async guarded<T>(work: () => Promise<T>): Promise<T | null> {
    this.set({ busy: true });
    try {
      const result = await work();
      this.set({ busy: false });
      return result;
    } catch (error) {
      if (error instanceof ApiError) {
        if (error.status === 409 && this.state.view) {
          // Conflict: our snapshot is stale; re-sync and retry nothing.
          const view = await this.api.getSession(this.state.view.id);
          this.apply(view);
          this.set({ busy: false, banner: `Out of sync, refreshed: ${error.message}` });
          return null;
        }
        this.set({ busy: false, banner: error.message });
        return null;
      }
      this.set({ busy: false, banner: 'Network failure; check the service and refresh.' });
      return null;
    }
  }

  async init(): Promise<void> {
    await this.guarded(async () => {
      const presets = await this.api.listPresets();
      this.set({ presets, screen: 'setup' });
    });
  }

  async start(preset: string, planner: string, model?: string): Promise<void> {
    await this.guarded(async () => {
      const view = await this.api.createSession({ preset, planner, model });
      this.set({ lastOutcome: null });
      this.apply(view);
    });
  }

  async choose(column: number): Promise<void> {
    const view = this.state.view;
    if (!view || view.phase !== 'AwaitingHuman') return;
    await this.guarded(async () => {
      this.apply(await this.api.submitAction(view.id, column));
    });
  }

  async answerLearned(learned: boolean): Promise<void> {
    const view = this.state.view;
    if (!view || view.phase !== 'AwaitingLearnedDeclaration') return;
    await this.guarded(async () => {
      this.apply(await this.api.declareLearned(view.id, learned));
    });
  }

  async resync(): Promise<void> {
    const view = this.state.view;
    if (!view) return;
    await this.guarded(async () => {
      this.apply(await this.api.getSession(view.id));
    });
  }

  reset(): void {
    this.set({ screen: 'setup', view: null, lastOutcome: null, banner: null });
  }
}

/** Sum of the reward column of a transcript CSV (server-computed numbers). */
export function transcriptTotal(csvText: string): number {
  const lines = csvText.trim().split(/\r?\n/);
  const header = lines[0].split(',');
  const rewardCol = header.indexOf('reward');
  let total = 0;
  for (const line of lines.slice(1)) {
    total += Number(line.split(',')[rewardCol]);
  }
  return total;
}
