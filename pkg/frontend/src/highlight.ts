/** Locate disease mentions in window text for inert highlighting.
 *
 * Matching mirrors the server: case-insensitive, whole-word, with
 * punctuation tolerated at word edges and any whitespace run between the
 * words of a multi-word synonym.
 */

export interface MentionRange {
  start: number;
  end: number;
}

function escapeRegExp(text: string): string {
  return text.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");
}

/** Build one regex that matches any synonym as a whole-word phrase. */
export function mentionPattern(synonyms: string[]): RegExp | null {
  const parts = synonyms
    .map((s) => s.trim())
    .filter((s) => s.length > 0)
    .sort((a, b) => b.length - a.length) // prefer the longest match
    .map((s) => s.split(/\s+/).map(escapeRegExp).join("\\s+"));
  if (parts.length === 0) return null;
  // word edges: start/end of text or a non-alphanumeric character
  return new RegExp(`(?<![\\p{L}\\p{N}])(?:${parts.join("|")})(?![\\p{L}\\p{N}])`, "giu");
}

export function findMentionRanges(text: string, synonyms: string[]): MentionRange[] {
  const pattern = mentionPattern(synonyms);
  if (!pattern) return [];
  const ranges: MentionRange[] = [];
  for (const match of text.matchAll(pattern)) {
    const start = match.index ?? 0;
    ranges.push({ start, end: start + match[0].length });
  }
  return ranges;
}

/** Split text into alternating plain/highlight segments for rendering. */
export function segmentText(
  text: string,
  ranges: MentionRange[],
): { text: string; highlighted: boolean }[] {
  const segments: { text: string; highlighted: boolean }[] = [];
  let cursor = 0;
  for (const range of ranges) {
    if (range.start > cursor) {
      segments.push({ text: text.slice(cursor, range.start), highlighted: false });
    }
    segments.push({ text: text.slice(range.start, range.end), highlighted: true });
    cursor = range.end;
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor), highlighted: false });
  }
  return segments;
}
