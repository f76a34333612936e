/** Minimal markdown rendering for suggestion bodies: code fences become
 * preformatted blocks, inline backticks become code spans, and a trailing
 * "Benefit:" line is emphasized. All input is HTML-escaped first. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function renderInline(text: string): string {
  return escapeHtml(text).replace(/`([^`]+)`/g, '<code>$1</code>');
}

export function renderMarkdown(text: string): string {
  const parts = text.split(/```(?:[a-z]*\n)?/);
  const out: string[] = [];
  // odd-indexed parts are fenced blocks
  parts.forEach((part, i) => {
    if (i % 2 === 1) {
      out.push(`<pre><code>${escapeHtml(part.replace(/\n$/, ''))}</code></pre>`);
      return;
    }
    for (const line of part.split('\n')) {
      if (line.trim() === '') continue;
      if (/^\s*Benefit:/.test(line)) {
        out.push(`<p class="benefit"><strong>${renderInline(line.trim())}</strong></p>`);
      } else {
        out.push(`<p>${renderInline(line)}</p>`);
      }
    }
  });
  return out.join('\n');
}
