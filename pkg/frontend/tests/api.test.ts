import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';
import { transcriptTotal } from '../src/flow.js';
import { FakeServer } from './fakeServer.js';

describe('ApiClient', () => {
  it('creates sessions and round-trips views', async () => {
    const server = new FakeServer();
    const api = new ApiClient('', server.fetch);
    const presets = await api.listPresets();
    expect(presets[0].name).toBe('table-clearing');

    const view = await api.createSession({ preset: 'table-clearing', planner: 'partial' });
    expect(view.leader_action?.label).toBe('Pick up both');
    expect(view.phase).toBe('AwaitingHuman');

    const same = await api.getSession(view.id);
    expect(same.id).toBe(view.id);
  });

  it('maps error bodies onto ApiError', async () => {
    const server = new FakeServer();
    const api = new ApiClient('', server.fetch);
    await expect(api.createSession({ preset: 'nope', planner: 'partial' })).rejects.toMatchObject({
      status: 404,
      code: 'unknown_preset',
    });
    const error = await api
      .createSession({ preset: 'nope', planner: 'partial' })
      .catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
  });

  it('submits actions with the column payload', async () => {
    const server = new FakeServer();
    const api = new ApiClient('', server.fetch);
    const view = await api.createSession({ preset: 'table-clearing', planner: 'partial' });
    const after = await api.submitAction(view.id, 2);
    expect(after.outcome?.reward).toBe(4);
    expect(after.cumulative_reward).toBe(4);
  });

  it('rejects out-of-range columns', async () => {
    const server = new FakeServer();
    const api = new ApiClient('', server.fetch);
    const view = await api.createSession({ preset: 'table-clearing', planner: 'partial' });
    await expect(api.submitAction(view.id, 7)).rejects.toMatchObject({ code: 'bad_column' });
  });
});

describe('transcriptTotal', () => {
  it('sums the server reward column', () => {
    const csv =
      'round,leader_action,human_action,reward,cumulative_reward,declared_learned\n' +
      '1,Pick up both,Clear cups,0.0,0.0,\n' +
      '2,Pick up both,Clear cups & move bin & empty bottle,4.0,4.0,\n';
    expect(transcriptTotal(csv)).toBe(4);
  });
});
