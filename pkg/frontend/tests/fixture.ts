import type { FetchLike, Suggestion } from '../src/types.js';

export function makeSuggestion(i: number): Suggestion {
  return {
    action_list: [`Typed value into cell A${i}`, `Copied cell A${i} to B${i}`],
    optimal: false,
    reason: `You repeated a manual edit ${i} times instead of filling down.`,
    suggestion:
      `1. Select the source cell.\n2. Use \`Ctrl+D\` to fill down.\n` +
      `Benefit: Original: ${i + 3} steps, Suggested: 2 steps`,
  };
}

export interface FixtureState {
  state: string;
  items: Suggestion[];
  revealed: number;
  actions: { text: string; segment: number; batch: number }[];
}

/** In-memory stand-in for the session service, exposing the same routes and
 * error envelope. State persists across client instances so tests can model
 * a page reload. */
export function makeFixtureService(state: FixtureState): FetchLike {
  const json = (status: number, body: unknown): Response =>
    new Response(JSON.stringify(body), {
      status,
      headers: { 'content-type': 'application/json' },
    });

  return async (input: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? 'GET';
    const url = new URL(input);
    const m = url.pathname.match(/^\/sessions\/([^/]+)(\/.*)?$/);
    if (!m || m[1] !== 'fixture') {
      return json(404, { code: 'session_not_found', message: 'unknown session' });
    }
    const rest = m[2] ?? '';
    if (rest === '' && method === 'GET') {
      return json(200, { session_id: 'fixture', state: state.state });
    }
    if (state.state !== 'ready') {
      return json(409, { code: 'invalid_state', message: `session is ${state.state}` });
    }
    if (rest === '/actions' && method === 'GET') {
      return json(200, { actions: state.actions });
    }
    if (rest === '/suggestions/next' && method === 'POST') {
      if (state.revealed >= state.items.length) {
        return json(200, { exhausted: true });
      }
      const suggestion = state.items[state.revealed];
      state.revealed += 1;
      return json(200, { exhausted: false, suggestion });
    }
    if (rest === '/suggestions' && method === 'GET') {
      return json(200, { items: state.items.slice(0, state.revealed) });
    }
    return json(404, { code: 'not_found', message: 'no such route' });
  };
}

export function threeItemState(): FixtureState {
  return {
    state: 'ready',
    items: [makeSuggestion(1), makeSuggestion(2), makeSuggestion(3)],
    revealed: 0,
    actions: [
      { text: 'Opened the budget workbook', segment: 0, batch: 0 },
      { text: 'Typed value into cell A1', segment: 0, batch: 1 },
    ],
  };
}
