import { Checkpoint } from './checkpoint.js';
import { PairRecord, PredictionRecord } from './types.js';

/** One probability row per pair over the task label set; argmax ties break
 * toward the earlier label in the canonical order. */
export function predictPairs(ckpt: Checkpoint, pairs: PairRecord[],
                             batchSize = 64): PredictionRecord[] {
  const { model, tokenizer, labels } = ckpt;
  const out: PredictionRecord[] = [];
  for (let at = 0; at < pairs.length; at += batchSize) {
    const chunk = pairs.slice(at, at + batchSize);
    const batch = chunk.map((p) => tokenizer.encode(p, model.cfg.maxLen));
    const probs = model.probabilities(batch);
    const rows = probs.arraySync() as number[][];
    probs.dispose();
    rows.forEach((row, i) => {
      const total = row.reduce((a, b) => a + b, 0);
      const scores: Record<string, number> = {};
      labels.forEach((label, j) => {
        scores[label] = row[j] / total;
      });
      let predicted = labels[0];
      labels.forEach((label) => {
        if (scores[label] > scores[predicted]) predicted = label;
      });
      out.push({
        review_id: chunk[i].review_id,
        target: chunk[i].target ?? null,
        category: chunk[i].category,
        scores,
        predicted,
      });
    });
  }
  return out;
}
