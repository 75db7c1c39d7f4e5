import { PairRecord } from './types.js';

export const PAD = '[PAD]';
export const CLS = '[CLS]';
export const SEP = '[SEP]';
export const UNK = '[UNK]';
const SPECIALS = [PAD, CLS, SEP, UNK];

export interface EncodedPair {
  ids: number[];       // [CLS] a_1..a_m [SEP] s_1..s_n [SEP], padded to maxLen
  segments: number[];  // 0 over [CLS]+auxiliary+first [SEP], 1 over review+second [SEP]
  mask: number[];      // 1 on real tokens, 0 on padding
}

export class WordTokenizer {
  readonly tokenToId: Map<string, number>;
  readonly idToToken: string[];

  constructor(idToToken: string[]) {
    this.idToToken = idToToken;
    this.tokenToId = new Map(idToToken.map((t, i) => [t, i]));
    for (const s of SPECIALS) {
      if (!this.tokenToId.has(s)) throw new Error(`vocabulary is missing ${s}`);
    }
  }

  static train(pairs: PairRecord[], minCount = 1): WordTokenizer {
    const counts = new Map<string, number>();
    for (const pair of pairs) {
      for (const tok of [...tokenize(pair.auxiliary_text), ...tokenize(pair.sentence_text)]) {
        counts.set(tok, (counts.get(tok) ?? 0) + 1);
      }
    }
    const kept = [...counts.entries()]
      .filter(([, c]) => c >= minCount)
      .sort((a, b) => b[1] - a[1] || (a[0] < b[0] ? -1 : 1))
      .map(([t]) => t);
    return new WordTokenizer([...SPECIALS, ...kept]);
  }

  get vocabSize(): number {
    return this.idToToken.length;
  }

  id(token: string): number {
    return this.tokenToId.get(token) ?? this.tokenToId.get(UNK)!;
  }

  decode(ids: number[]): string[] {
    return ids.map((i) => this.idToToken[i] ?? UNK);
  }

  /**
   * [CLS] auxiliary [SEP] review [SEP], truncating the review tail first.
   * The auxiliary segment is never truncated: an auxiliary that cannot fit
   * alongside both separators is a hard error.
   */
  encode(pair: PairRecord, maxLen: number): EncodedPair {
    const aux = tokenize(pair.auxiliary_text);
    const review = tokenize(pair.sentence_text);
    const fixed = aux.length + 3; // [CLS], [SEP], [SEP]
    if (fixed > maxLen) {
      throw new Error(
        `auxiliary segment (${aux.length} tokens) does not fit in maxLen=${maxLen}; refusing to truncate it`,
      );
    }
    const room = maxLen - fixed;
    const body = review.slice(0, room);
    const tokens = [CLS, ...aux, SEP, ...body, SEP];
    const segments = new Array(aux.length + 2).fill(0).concat(new Array(body.length + 1).fill(1));
    const ids = tokens.map((t) => this.id(t));
    const mask = new Array(ids.length).fill(1);
    while (ids.length < maxLen) {
      ids.push(this.id(PAD));
      segments.push(0);
      mask.push(0);
    }
    return { ids, segments, mask };
  }
}

export function tokenize(text: string): string[] {
  return text
    .toLowerCase()
    .split(/[^a-z0-9'-]+/)
    .filter((t) => t.length > 0);
}
