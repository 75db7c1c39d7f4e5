import { describe, expect, it } from 'vitest';
import { CLS, PAD, SEP, UNK, WordTokenizer, tokenize } from '../src/tokenizer.js';
import { toyPairs } from './toydata.js';

const pairs = toyPairs(12);
const tok = WordTokenizer.train(pairs);

function pair(aux: string, sent: string) {
  return { ...pairs[0], auxiliary_text: aux, sentence_text: sent };
}

describe('encode', () => {
  it('lays out [CLS] aux [SEP] review [SEP] with segment ids', () => {
    const enc = tok.encode(pair('coffee outstanding', 'did i mention the coffee'), 16);
    const tokens = tok.decode(enc.ids);
    expect(tokens[0]).toBe(CLS);
    expect(tokens.filter((t) => t === CLS)).toHaveLength(1);
    expect(tokens.filter((t) => t === SEP)).toHaveLength(2);
    const firstSep = tokens.indexOf(SEP);
    expect(tokens.slice(1, firstSep)).toEqual(['coffee', 'outstanding']);
    // segment A covers [CLS] + auxiliary + first [SEP], B covers the rest
    expect(enc.segments.slice(0, firstSep + 1)).toEqual(new Array(firstSep + 1).fill(0));
    const lastSep = tokens.lastIndexOf(SEP);
    expect(enc.segments.slice(firstSep + 1, lastSep + 1)).toEqual(
      new Array(lastSep - firstSep).fill(1));
    expect(enc.ids).toHaveLength(16);
    expect(enc.mask.reduce((a, b) => a + b, 0)).toBe(lastSep + 1);
  });

  it('truncates the review tail first, never the auxiliary', () => {
    const enc = tok.encode(pair('a b c', 'one two three four five six seven'), 10);
    const tokens = tok.decode(enc.ids);
    const firstSep = tokens.indexOf(SEP);
    expect(tokens.slice(1, firstSep)).toHaveLength(3); // auxiliary intact
    expect(tokens.filter((t) => t === SEP)).toHaveLength(2);
    expect(tokens).toHaveLength(10);
  });

  it('rejects an auxiliary that cannot fit', () => {
    expect(() => tok.encode(pair('a b c d e f g h', 'x'), 8)).toThrow(/refusing to truncate/);
  });

  it('handles an empty review with an empty B segment', () => {
    const enc = tok.encode(pair('service', ''), 8);
    const tokens = tok.decode(enc.ids);
    const seps = tokens.flatMap((t, i) => (t === SEP ? [i] : []));
    expect(seps).toHaveLength(2);
    expect(seps[1]).toBe(seps[0] + 1); // nothing between the separators
  });

  it('round-trips token strings modulo unknowns', () => {
    const enc = tok.encode(pair('service friendly', 'the staff was kind'), 12);
    const tokens = tok.decode(enc.ids).filter((t) => ![CLS, SEP, PAD].includes(t));
    for (const original of ['service', 'friendly', 'staff']) {
      expect(tokens).toContain(original);
    }
  });

  it('maps unseen words to the unknown token', () => {
    expect(tok.decode([tok.id('zyzzyva')])).toEqual([UNK]);
  });
});

describe('tokenize', () => {
  it('lowercases and keeps word-internal apostrophes and hyphens', () => {
    expect(tokenize("Transit-Location isn't BAD!")).toEqual(
      ['transit-location', "isn't", 'bad']);
  });
});
