/**
 * Text direction helpers.
 *
 * Sorani Kurdish is written in an Arabic-based alphabet and renders
 * right-to-left; Kurmanji and English use Latin letters. Columns are
 * directed by the first strong directional character of their text, the
 * same rule dir="auto" applies, so mixed content (Latin numerals inside
 * a Sorani headline, say) still comes out right.
 */

// Arabic block plus supplements and presentation forms, and Hebrew for
// completeness; these are the strong RTL ranges we can meet in news text.
const STRONG_RTL = /[֐-׿؀-ۿ܀-ݏݐ-ݿࢠ-ࣿיִ-﷿ﹰ-﻿]/;
const STRONG_LTR = /[A-Za-zÀ-ɏḀ-ỿ]/;

export type Direction = 'rtl' | 'ltr';

export function textDirection(text: string): Direction {
  for (const ch of text) {
    if (STRONG_RTL.test(ch)) {
      return 'rtl';
    }
    if (STRONG_LTR.test(ch)) {
      return 'ltr';
    }
  }
  return 'ltr';
}

/**
 * Direction for a whole column of segments: decided by the first
 * segment with a strong character, so one quoted Latin name inside an
 * otherwise Arabic-script column cannot flip the layout.
 */
export function columnDirection(texts: Iterable<string>): Direction {
  for (const text of texts) {
    for (const ch of text) {
      if (STRONG_RTL.test(ch)) {
        return 'rtl';
      }
      if (STRONG_LTR.test(ch)) {
        return 'ltr';
      }
    }
  }
  return 'ltr';
}
