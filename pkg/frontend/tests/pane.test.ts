import { describe, expect, it } from 'vitest';
import { ApiClient } from '../src/api.js';
import {
  COMPLETION_NOTICE,
  ENTRY_MESSAGE,
  TaskPane,
} from '../src/pane.js';
import { makeFixtureService, threeItemState } from './fixture.js';

function makePane(state = threeItemState()): { pane: TaskPane; state: typeof state } {
  const api = new ApiClient('http://service.test', makeFixtureService(state));
  return { pane: new TaskPane(api, 'fixture'), state };
}

describe('entry-point click', () => {
  it('renders card 1 with all four parts', async () => {
    const { pane } = makePane();
    await pane.entryPointClick();
    const html = pane.renderHtml();
    expect(html).toContain(ENTRY_MESSAGE);
    expect(html).toContain('data-card="0"');
    // ② observed actions
    expect(html).toContain('<ul class="observed-actions">');
    expect(html).toContain('<li>Typed value into cell A1</li>');
    // ③ workflow limitation
    expect(html).toContain('class="limitation"');
    expect(html).toContain('You repeated a manual edit 1 times');
    // ④ step-by-step suggestion with inline code span
    expect(html).toContain('class="steps"');
    expect(html).toContain('<code>Ctrl+D</code>');
    // highlighted benefit line
    expect(html).toContain('class="benefit"');
    expect(html).toContain('Benefit: Original: 4 steps, Suggested: 2 steps');
  });

  it('shows the analyzing indicator and no card while the session is not ready', async () => {
    const state = threeItemState();
    state.state = 'tracing';
    const { pane } = makePane(state);
    await pane.entryPointClick();
    const html = pane.renderHtml();
    expect(pane.status).toBe('analyzing');
    expect(html).toContain('class="analyzing"');
    expect(html).not.toContain('data-card=');
  });

  it('shows a retry affordance on network failure', async () => {
    const api = new ApiClient('http://service.test', async () => {
      throw new TypeError('fetch failed');
    });
    const pane = new TaskPane(api, 'fixture');
    await pane.entryPointClick();
    const html = pane.renderHtml();
    expect(pane.status).toBe('retry');
    expect(html).toContain('<button class="retry">');
  });
});

describe('sequential reveal', () => {
  it('three clicks yield three cards; the fourth disables the button with a completion notice', async () => {
    const { pane } = makePane();
    await pane.entryPointClick();
    await pane.revealNextClick();
    await pane.revealNextClick();
    expect(pane.cards).toHaveLength(3);
    let html = pane.renderHtml();
    expect(html).toContain('data-card="0"');
    expect(html).toContain('data-card="1"');
    expect(html).toContain('data-card="2"');
    expect(html).not.toContain('disabled');
    expect(html).not.toContain(COMPLETION_NOTICE);

    await pane.revealNextClick();
    html = pane.renderHtml();
    expect(pane.cards).toHaveLength(3);
    expect(html).toContain(COMPLETION_NOTICE);
    expect(html).toContain('<button class="reveal-next" disabled>');
    // earlier cards remain visible above
    expect(html).toContain('data-card="0"');
    expect(html).toContain('data-card="2"');
  });

  it('disables the button after the first reveal on a 1-item session', async () => {
    const state = threeItemState();
    state.items = state.items.slice(0, 1);
    const { pane } = makePane(state);
    await pane.entryPointClick();
    await pane.revealNextClick();
    expect(pane.cards).toHaveLength(1);
    expect(pane.buttonDisabled).toBe(true);
  });

  it('no further click consumes a suggestion once exhausted', async () => {
    const { pane, state } = makePane();
    for (let i = 0; i < 6; i++) await pane.revealNextClick();
    expect(pane.cards).toHaveLength(3);
    expect(state.revealed).toBe(3);
  });
});

describe('reload restore', () => {
  it('restores all revealed cards in order without consuming new ones', async () => {
    const state = threeItemState();
    {
      const { pane } = makePane(state);
      await pane.entryPointClick();
      await pane.revealNextClick();
      expect(pane.cards).toHaveLength(2);
    }
    // simulate a page reload: fresh pane, same service state
    const { pane: reloaded } = makePane(state);
    await reloaded.restore();
    expect(reloaded.cards).toHaveLength(2);
    const html = reloaded.renderHtml();
    const first = html.indexOf('manual edit 1 times');
    const second = html.indexOf('manual edit 2 times');
    expect(first).toBeGreaterThan(-1);
    expect(second).toBeGreaterThan(first);
    expect(state.revealed).toBe(2);
    expect(reloaded.buttonDisabled).toBe(false);
  });

  it('restore on a not-ready session shows the analyzing indicator', async () => {
    const state = threeItemState();
    state.state = 'extracting';
    const { pane } = makePane(state);
    await pane.restore();
    expect(pane.status).toBe('analyzing');
  });
});

describe('actions summary', () => {
  it('renders the full trace as an ordered list', async () => {
    const { pane } = makePane();
    await pane.loadFullTrace();
    const html = pane.renderHtml();
    expect(html).toContain('<details class="full-trace">');
    expect(html).toContain('<li>Opened the budget workbook</li>');
  });

  it('shows an empty-state message for an empty trace', async () => {
    const state = threeItemState();
    state.actions = [];
    const { pane } = makePane(state);
    await pane.loadFullTrace();
    expect(pane.renderHtml()).toContain('No actions were detected');
  });

  it('escapes markup in action text instead of executing it', async () => {
    const state = threeItemState();
    state.actions = [{ text: '<img src=x onerror=alert(1)>', segment: 0, batch: 0 }];
    state.items[0].action_list = ['<script>alert(1)</script>'];
    const { pane } = makePane(state);
    await pane.loadFullTrace();
    await pane.entryPointClick();
    const html = pane.renderHtml();
    expect(html).not.toContain('<script>');
    expect(html).not.toContain('<img');
    expect(html).toContain('&lt;script&gt;');
    expect(html).toContain('&lt;img src=x onerror=alert(1)&gt;');
  });
});

describe('error envelope', () => {
  it('unknown session surfaces the retry affordance', async () => {
    const api = new ApiClient('http://service.test', makeFixtureService(threeItemState()));
    const pane = new TaskPane(api, 'nope');
    await pane.entryPointClick();
    expect(pane.status).toBe('retry');
  });
});
