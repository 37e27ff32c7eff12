/** Shareable URL state: the draft list is the only thing that survives
 * a reload, encoded in the fragment so nothing hits the server. */

import { ScenarioDraft, defaultDraft } from './types.js';

const utf8ToBase64 = (text: string): string => {
  if (typeof btoa === 'function') {
    return btoa(unescape(encodeURIComponent(text)));
  }
  return Buffer.from(text, 'utf-8').toString('base64');
};

const base64ToUtf8 = (encoded: string): string => {
  if (typeof atob === 'function') {
    return decodeURIComponent(escape(atob(encoded)));
  }
  return Buffer.from(encoded, 'base64').toString('utf-8');
};

export function encodeDrafts(drafts: ScenarioDraft[]): string {
  return '#s=' + encodeURIComponent(utf8ToBase64(JSON.stringify(drafts)));
}

export function decodeDrafts(hash: string): ScenarioDraft[] {
  const match = /^#s=(.+)$/.exec(hash.trim());
  if (!match) return [];
  try {
    const parsed = JSON.parse(base64ToUtf8(decodeURIComponent(match[1])));
    if (!Array.isArray(parsed)) return [];
    const base = defaultDraft();
    return parsed
      .filter((item) => item && typeof item === 'object')
      .map((item) => ({ ...base, ...(item as Partial<ScenarioDraft>) }));
  } catch {
    return [];
  }
}
