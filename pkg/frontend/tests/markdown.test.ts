import { describe, expect, it } from 'vitest';
import { escapeHtml, renderMarkdown } from '../src/markdown.js';
import { splitBenefit } from '../src/pane.js';

describe('escapeHtml', () => {
  it('neutralizes tags and entities', () => {
    expect(escapeHtml('<b>&"</b>')).toBe('&lt;b&gt;&amp;&quot;&lt;/b&gt;');
  });
});

describe('renderMarkdown', () => {
  it('renders code fences as preformatted blocks', () => {
    const html = renderMarkdown('Use this formula:\n```\n=SUM(A1:A5)\n```\nDone.');
    expect(html).toContain('<pre><code>=SUM(A1:A5)</code></pre>');
    expect(html).toContain('<p>Use this formula:</p>');
  });

  it('renders inline backticks as code spans', () => {
    expect(renderMarkdown('Press `Ctrl+D` to fill down.')).toContain('<code>Ctrl+D</code>');
  });

  it('escapes HTML inside fences and prose', () => {
    const html = renderMarkdown('<script>x</script>\n```\n<script>y</script>\n```');
    expect(html).not.toContain('<script>');
    expect(html.match(/&lt;script&gt;/g)).toHaveLength(2);
  });

  it('emphasizes a Benefit line', () => {
    const html = renderMarkdown('Benefit: Original: 4 steps, Suggested: 2 steps');
    expect(html).toContain('class="benefit"');
    expect(html).toContain('<strong>');
  });
});

describe('splitBenefit', () => {
  it('splits a trailing benefit line off the steps', () => {
    const { steps, benefit } = splitBenefit('1. Do a thing.\nBenefit: Original: 4 steps, Suggested: 2 steps');
    expect(steps).toBe('1. Do a thing.');
    expect(benefit).toBe('Benefit: Original: 4 steps, Suggested: 2 steps');
  });

  it('degrades gracefully when no benefit line is present', () => {
    const { steps, benefit } = splitBenefit('1. Do a thing.\n2. Do another.');
    expect(benefit).toBeNull();
    expect(steps).toContain('2. Do another.');
  });

  it('ignores a Benefit line that is not trailing', () => {
    const body = 'Benefit: early mention\nThen more steps follow.';
    const { benefit } = splitBenefit(body);
    expect(benefit).toBeNull();
  });
});
