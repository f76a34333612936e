import { ApiClient, ApiError } from './api.js';
import { escapeHtml, renderMarkdown } from './markdown.js';
import type { Suggestion, TraceAction } from './types.js';

export const ENTRY_MESSAGE = 'Show me suggestions to improve my workflow';
export const COMPLETION_NOTICE = 'No more suggestions for this recording.';
export const ANALYZING_NOTICE = 'Analyzing your recording…';
export const RETRY_NOTICE = 'Could not reach the suggestion service.';

export interface CardView {
  observedActionsHtml: string;
  limitationHtml: string;
  stepsHtml: string;
  benefitHtml: string | null;
}

export type PaneStatus = 'idle' | 'analyzing' | 'pending' | 'active' | 'exhausted' | 'retry';

/** Splits a suggestion body into its step instructions and a trailing
 * benefit line, when one is present. */
export function splitBenefit(body: string): { steps: string; benefit: string | null } {
  const lines = body.split('\n');
  for (let i = lines.length - 1; i >= 0; i--) {
    const line = lines[i].trim();
    if (line === '') continue;
    if (line.startsWith('Benefit:')) {
      return { steps: lines.slice(0, i).join('\n').trimEnd(), benefit: line };
    }
    break;
  }
  return { steps: body, benefit: null };
}

export function buildCard(suggestion: Suggestion): CardView {
  const bullets = suggestion.action_list
    .map((a) => `<li>${escapeHtml(a)}</li>`)
    .join('');
  const { steps, benefit } = splitBenefit(suggestion.suggestion);
  return {
    observedActionsHtml: `<ul class="observed-actions">${bullets}</ul>`,
    limitationHtml: `<p class="limitation">${escapeHtml(suggestion.reason)}</p>`,
    stepsHtml: `<div class="steps">${renderMarkdown(steps)}</div>`,
    benefitHtml: benefit
      ? `<p class="benefit"><strong>${escapeHtml(benefit)}</strong></p>`
      : null,
  };
}

export function renderCardHtml(card: CardView, index: number): string {
  const parts = [
    `<section class="card" data-card="${index}">`,
    `<h3>Suggestion ${index + 1}</h3>`,
    `<h4>Observed actions</h4>`,
    card.observedActionsHtml,
    `<h4>Workflow limitation</h4>`,
    card.limitationHtml,
    `<h4>Suggested steps</h4>`,
    card.stepsHtml,
  ];
  if (card.benefitHtml) parts.push(card.benefitHtml);
  parts.push('</section>');
  return parts.join('\n');
}

/** Conversation-style task pane: an entry-point request message followed by a
 * vertical stack of suggestion cards revealed one at a time. */
export class TaskPane {
  status: PaneStatus = 'idle';
  cards: CardView[] = [];
  entryShown = false;
  fullTrace: TraceAction[] | null = null;

  constructor(
    private api: ApiClient,
    private sessionId: string,
  ) {}

  get buttonDisabled(): boolean {
    return this.status === 'pending' || this.status === 'exhausted';
  }

  /** Re-populates the pane from the service after a page reload: previously
   * revealed suggestions come back in reveal order without consuming new ones. */
  async restore(): Promise<void> {
    const session = await this.api.getSession(this.sessionId);
    if (session.state !== 'ready') {
      this.status = session.state === 'error' ? 'retry' : 'analyzing';
      return;
    }
    const { items } = await this.api.revealedSuggestions(this.sessionId);
    this.cards = items.map(buildCard);
    if (this.cards.length > 0) this.entryShown = true;
    this.status = this.cards.length > 0 ? 'active' : 'idle';
  }

  /** First interaction: posts the canned request message and reveals card 1. */
  async entryPointClick(): Promise<void> {
    this.entryShown = true;
    await this.revealNext();
  }

  /** "Give me another suggestion": reveals the next card or, once the queue is
   * drained, disables the button and shows the completion notice. */
  async revealNextClick(): Promise<void> {
    await this.revealNext();
  }

  async loadFullTrace(): Promise<void> {
    const { actions } = await this.api.getActions(this.sessionId);
    this.fullTrace = actions;
  }

  private async revealNext(): Promise<void> {
    if (this.buttonDisabled) return;
    this.status = 'pending';
    try {
      const resp = await this.api.nextSuggestion(this.sessionId);
      if (resp.exhausted || !resp.suggestion) {
        this.status = 'exhausted';
      } else {
        this.cards.push(buildCard(resp.suggestion));
        this.status = 'active';
      }
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.status = 'analyzing';
      } else {
        this.status = 'retry';
      }
    }
  }

  renderHtml(): string {
    const out: string[] = ['<div class="pane">'];
    if (this.entryShown) {
      out.push(`<p class="entry-message">${escapeHtml(ENTRY_MESSAGE)}</p>`);
    }
    this.cards.forEach((card, i) => out.push(renderCardHtml(card, i)));
    if (this.status === 'analyzing') {
      out.push(`<p class="analyzing">${escapeHtml(ANALYZING_NOTICE)}</p>`);
    }
    if (this.status === 'retry') {
      out.push(
        `<p class="retry-notice">${escapeHtml(RETRY_NOTICE)}</p>`,
        '<button class="retry">Retry</button>',
      );
    }
    if (this.status === 'exhausted') {
      out.push(`<p class="completion-notice">${escapeHtml(COMPLETION_NOTICE)}</p>`);
    }
    out.push(
      `<button class="reveal-next"${this.buttonDisabled ? ' disabled' : ''}>` +
        (this.cards.length === 0 ? escapeHtml(ENTRY_MESSAGE) : 'Give me another suggestion') +
        '</button>',
    );
    if (this.fullTrace !== null) {
      out.push('<details class="full-trace"><summary>Full action trace</summary>');
      if (this.fullTrace.length === 0) {
        out.push('<p class="empty-trace">No actions were detected in this recording.</p>');
      } else {
        const items = this.fullTrace
          .map((a) => `<li>${escapeHtml(a.text)}</li>`)
          .join('');
        out.push(`<ol>${items}</ol>`);
      }
      out.push('</details>');
    }
    out.push('</div>');
    return out.join('\n');
  }
}
