import { describe, expect, it } from 'vitest';

import { columnDirection, textDirection } from '../src/direction.js';

describe('textDirection', () => {
  it('marks Arabic-script Kurdish right-to-left', () => {
    expect(textDirection('هەولێر')).toBe('rtl');
    expect(textDirection('یارییەکانی هەولێر بەردەوامن')).toBe('rtl');
  });

  it('marks Latin-script text left-to-right', () => {
    expect(textDirection('Hewlêr')).toBe('ltr');
    expect(textDirection('Festîvala hunerî dest pê kir.')).toBe('ltr');
  });

  it('skips neutral characters until a strong one decides', () => {
    expect(textDirection('«هەولێر»')).toBe('rtl');
    expect(textDirection('2020 - یارییەکان')).toBe('rtl');
    expect(textDirection('3.5 points')).toBe('ltr');
  });

  it('defaults to left-to-right with no strong characters', () => {
    expect(textDirection('')).toBe('ltr');
    expect(textDirection('1399')).toBe('ltr');
  });
});

describe('columnDirection', () => {
  it('follows the first strong character across segments', () => {
    expect(columnDirection(['٢٠٢٠', 'هەولێر', 'Latin quote'])).toBe('rtl');
    expect(columnDirection(['12.', 'One.', 'هەولێر'])).toBe('ltr');
    expect(columnDirection([])).toBe('ltr');
  });
});
