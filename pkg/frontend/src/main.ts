import { ApiClient } from './api.js';
import { TaskPane } from './pane.js';

const POLL_INTERVAL_MS = 1000;

function params(): { baseUrl: string; sessionId: string } {
  const search = new URLSearchParams(window.location.search);
  return {
    baseUrl: search.get('base') ?? 'http://127.0.0.1:8000',
    sessionId: search.get('session') ?? '',
  };
}

export async function mount(root: HTMLElement): Promise<void> {
  const { baseUrl, sessionId } = params();
  if (!sessionId) {
    root.innerHTML = '<p>Add ?session=&lt;id&gt; to the URL to open a session.</p>';
    return;
  }
  const pane = new TaskPane(new ApiClient(baseUrl), sessionId);

  const render = () => {
    root.innerHTML = pane.renderHtml();
    const next = root.querySelector<HTMLButtonElement>('button.reveal-next');
    next?.addEventListener('click', async () => {
      if (pane.cards.length === 0) {
        await pane.entryPointClick();
      } else {
        await pane.revealNextClick();
      }
      render();
      if (pane.status === 'analyzing') pollUntilReady();
    });
    const retry = root.querySelector<HTMLButtonElement>('button.retry');
    retry?.addEventListener('click', async () => {
      await pane.restore();
      render();
    });
  };

  const pollUntilReady = () => {
    const timer = window.setInterval(async () => {
      await pane.restore();
      if (pane.status !== 'analyzing') {
        window.clearInterval(timer);
        render();
      }
    }, POLL_INTERVAL_MS);
  };

  await pane.restore();
  render();
  if (pane.status === 'analyzing') pollUntilReady();
}

const rootEl = document.getElementById('pane-root');
if (rootEl) void mount(rootEl);
