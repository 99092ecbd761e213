import { ApiClient } from './api.js';
import { GameFlow, type FlowState } from './flow.js';
import type { HistoryEntry } from './types.js';

const api = new ApiClient('');
const root = document.getElementById('app') as HTMLElement;
const flow = new GameFlow(api, render);

const POLL_MS = 2000;
let pollTimer: number | undefined;

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function goalCopy(preset: string): string {
  if (preset === 'table-clearing') {
    return 'You and the robot clear a table together. The goal is to maximize the number of objects placed in the bins at each round.';
  }
  return 'Pick the response that maximizes the joint score each round.';
}

function render(state: FlowState): void {
  root.replaceChildren();
  if (state.banner) {
    const banner = el('div', 'banner', state.banner);
    const retry = el('button', 'small', 'Refresh');
    retry.addEventListener('click', () => (state.view ? flow.resync() : flow.init()));
    banner.appendChild(retry);
    root.appendChild(banner);
  }
  if (state.screen === 'setup') renderSetup(state);
  else if (state.screen === 'play') renderPlay(state);
  else renderSummary(state);
}

function renderSetup(state: FlowState): void {
  const card = el('div', 'card');
  card.appendChild(el('h1', undefined, 'Play with the robot'));
  const picker = el('div', 'setup-grid');

  const presetLabel = el('label', undefined, 'Scenario');
  const presetSelect = document.createElement('select');
  for (const preset of state.presets) {
    const option = document.createElement('option');
    option.value = preset.name;
    option.textContent = `${preset.name} (${preset.horizon} rounds)`;
    presetSelect.appendChild(option);
  }
  presetLabel.appendChild(presetSelect);

  const plannerLabel = el('label', undefined, 'Robot planner');
  const plannerSelect = document.createElement('select');
  for (const planner of ['partial', 'complete']) {
    const option = document.createElement('option');
    option.value = planner;
    option.textContent = planner;
    plannerSelect.appendChild(option);
  }
  plannerLabel.appendChild(plannerSelect);

  const modelLabel = el('label', undefined, 'Setting');
  const modelSelect = document.createElement('select');
  for (const [value, text] of [
    ['', 'scenario default'],
    ['M3', 'robot infers from your responses (M3)'],
    ['M2', 'robot asks after each round (M2)'],
  ]) {
    const option = document.createElement('option');
    option.value = value;
    option.textContent = text;
    modelSelect.appendChild(option);
  }
  modelLabel.appendChild(modelSelect);

  picker.append(presetLabel, plannerLabel, modelLabel);
  card.appendChild(picker);

  const intro = el('p', 'muted');
  const updateIntro = () => (intro.textContent = goalCopy(presetSelect.value));
  presetSelect.addEventListener('change', updateIntro);
  updateIntro();
  card.appendChild(intro);

  const start = el('button', 'primary', 'Start session') as HTMLButtonElement;
  start.disabled = state.busy || state.presets.length === 0;
  start.addEventListener('click', () =>
    flow.start(presetSelect.value, plannerSelect.value, modelSelect.value || undefined),
  );
  card.appendChild(start);
  root.appendChild(card);
}

function outcomeLine(entry: HistoryEntry): HTMLElement {
  const line = el('div', 'outcome');
  line.appendChild(
    el(
      'span',
      undefined,
      `Round ${entry.round}: robot "${entry.row_label}", you "${entry.column_label}" - reward ${entry.reward}`,
    ),
  );
  if (entry.note) line.appendChild(el('div', 'note', entry.note));
  return line;
}

function renderPlay(state: FlowState): void {
  const view = state.view;
  if (!view) return;
  const card = el('div', 'card');
  card.appendChild(el('h1', undefined, `Round ${view.round} of ${view.horizon}`));
  card.appendChild(el('div', 'score', `Score so far: ${view.cumulative_reward}`));

  if (view.leader_action) {
    card.appendChild(el('p', 'leader', `The robot chose: ${view.leader_action.label}`));
    const payoffs = view.revealed_rows[String(view.leader_action.index)];
    if (payoffs) {
      card.appendChild(el('p', 'muted', `True payoffs for this action: ${payoffs.join(', ')}`));
    }
  }

  if (view.phase === 'AwaitingLearnedDeclaration') {
    card.appendChild(
      el(
        'p',
        'prompt',
        'If the robot did the same action next round, would you now pick the best response? Did you learn the true payoffs for this robot action?',
      ),
    );
    const yes = el('button', 'primary', 'Yes, learned') as HTMLButtonElement;
    const no = el('button', undefined, 'Not yet') as HTMLButtonElement;
    yes.disabled = no.disabled = state.busy;
    yes.addEventListener('click', () => flow.answerLearned(true));
    no.addEventListener('click', () => flow.answerLearned(false));
    const row = el('div', 'choices');
    row.append(yes, no);
    card.appendChild(row);
  } else {
    card.appendChild(el('p', undefined, 'Pick your response:'));
    const choices = el('div', 'choices');
    view.column_labels.forEach((label, column) => {
      const button = el('button', undefined, label) as HTMLButtonElement;
      button.disabled = state.busy;
      button.addEventListener('click', () => flow.choose(column));
      choices.appendChild(button);
    });
    card.appendChild(choices);
  }

  if (state.lastOutcome) card.appendChild(outcomeLine(state.lastOutcome));
  root.appendChild(card);
}

function renderSummary(state: FlowState): void {
  const view = state.view;
  if (!view) return;
  const card = el('div', 'card');
  card.appendChild(el('h1', undefined, 'Session complete'));
  card.appendChild(el('div', 'score', `Total reward: ${view.cumulative_reward}`));

  const maxReward = Math.max(1, ...view.history.map((entry) => entry.reward));
  const chart = el('div', 'chart');
  for (const entry of view.history) {
    const bar = el('div', 'bar');
    bar.style.height = `${(entry.reward / maxReward) * 100}%`;
    bar.title = `Round ${entry.round}: ${entry.reward}`;
    bar.appendChild(el('span', 'bar-label', String(entry.reward)));
    chart.appendChild(bar);
  }
  card.appendChild(chart);

  const table = el('table') as HTMLTableElement;
  const head = table.createTHead().insertRow();
  for (const title of ['Round', 'Robot', 'You', 'Reward']) {
    head.appendChild(el('th', undefined, title));
  }
  const body = table.createTBody();
  for (const entry of view.history) {
    const row = body.insertRow();
    row.insertCell().textContent = String(entry.round);
    row.insertCell().textContent = entry.row_label;
    row.insertCell().textContent = entry.column_label;
    row.insertCell().textContent = String(entry.reward);
  }
  card.appendChild(table);

  const transcript = el('a', 'muted', 'Download transcript (CSV)') as HTMLAnchorElement;
  transcript.href = `/sessions/${view.id}/transcript.csv`;
  card.appendChild(transcript);

  const again = el('button', 'primary', 'Play again');
  again.addEventListener('click', () => flow.reset());
  card.appendChild(again);
  root.appendChild(card);
}

function schedulePolling(): void {
  if (pollTimer !== undefined) window.clearInterval(pollTimer);
  pollTimer = window.setInterval(() => {
    const state = flow.snapshot();
    if (state.screen === 'play' && !state.busy) flow.resync();
  }, POLL_MS);
}

flow.init().then(schedulePolling);
