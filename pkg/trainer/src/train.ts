import * as fs from 'node:fs';
import * as path from 'node:path';
import * as tf from '@tensorflow/tfjs';
import { saveCheckpoint } from './checkpoint.js';
import { PairClassifier } from './model.js';
import { EncodedPair, WordTokenizer } from './tokenizer.js';
import { PairRecord, TrainerConfig, labelsForTask } from './types.js';

export interface TrainResult {
  model: PairClassifier;
  tokenizer: WordTokenizer;
  labels: string[];
  lossLog: { step: number; loss: number }[];
}

/** Deterministic shuffle (mulberry32) so runs are reproducible per seed. */
function shuffled<T>(items: T[], seed: number): T[] {
  let s = seed >>> 0;
  const rand = () => {
    s = (s + 0x6d2b79f5) >>> 0;
    let t = s;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
  const out = [...items];
  for (let i = out.length - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    [out[i], out[j]] = [out[j], out[i]];
  }
  return out;
}

export function trainModel(pairs: PairRecord[], config: TrainerConfig): TrainResult {
  const labels = labelsForTask(config.task);
  const labelIds = new Map(labels.map((l, i) => [l, i]));
  for (const pair of pairs) {
    if (!labelIds.has(pair.gold_label)) {
      throw new Error(`label '${pair.gold_label}' outside the ${config.task} label set`);
    }
  }
  if (pairs.length === 0) throw new Error('no training pairs');

  const tokenizer = WordTokenizer.train(pairs);
  const model = new PairClassifier(config, tokenizer.vocabSize, labels.length);
  const encoded = pairs.map((p) => tokenizer.encode(p, config.maxLen));
  const ys = pairs.map((p) => labelIds.get(p.gold_label)!);

  const optimizer = tf.train.adam(config.learningRate);
  const lossLog: { step: number; loss: number }[] = [];
  const order = [...encoded.keys()];
  let step = 0;
  const maxSteps = config.maxSteps > 0 ? config.maxSteps : Infinity;

  outer: for (let epoch = 0; epoch < Math.max(config.epochs, 1); epoch++) {
    const perm = shuffled(order, config.rngSeed + epoch);
    for (let at = 0; at < perm.length; at += config.batchSize) {
      const idx = perm.slice(at, at + config.batchSize);
      const batch: EncodedPair[] = idx.map((i) => encoded[i]);
      const batchYs = idx.map((i) => ys[i]);
      const cost = optimizer.minimize(() => model.loss(batch, batchYs, true), true,
                                      model.trainableVariables());
      lossLog.push({ step, loss: cost!.dataSync()[0] });
      cost!.dispose();
      step += 1;
      if (step >= maxSteps) break outer;
    }
  }
  optimizer.dispose();
  return { model, tokenizer, labels, lossLog };
}

export function trainingAccuracy(result: TrainResult, pairs: PairRecord[],
                                 batchSize = 64): number {
  const { model, tokenizer, labels } = result;
  let hits = 0;
  for (let at = 0; at < pairs.length; at += batchSize) {
    const chunk = pairs.slice(at, at + batchSize);
    const batch = chunk.map((p) => tokenizer.encode(p, model.cfg.maxLen));
    const probs = model.probabilities(batch);
    const rows = probs.arraySync() as number[][];
    probs.dispose();
    rows.forEach((row, i) => {
      const best = labels[row.indexOf(Math.max(...row))];
      if (best === chunk[i].gold_label) hits += 1;
    });
  }
  return hits / pairs.length;
}

export function runTrainCli(pairsFile: string, configFile: string | null, outDir: string,
                            readPairs: (f: string) => PairRecord[],
                            makeConfig: (raw: Record<string, unknown>) => TrainerConfig): void {
  const raw = configFile ? JSON.parse(fs.readFileSync(configFile, 'utf-8')) : {};
  const config = makeConfig(raw);
  const pairs = readPairs(pairsFile);
  const result = trainModel(pairs, config);
  saveCheckpoint(outDir, result.model, result.tokenizer, result.labels);
  fs.writeFileSync(path.join(outDir, 'loss_log.jsonl'),
    result.lossLog.map((e) => JSON.stringify(e)).join('\n') + '\n');
  const first = result.lossLog[0]?.loss ?? NaN;
  const last = result.lossLog[result.lossLog.length - 1]?.loss ?? NaN;
  console.log(`trained ${result.lossLog.length} steps on ${pairs.length} pairs; ` +
    `loss ${first.toFixed(4)} -> ${last.toFixed(4)}; checkpoint in ${outDir}`);
}
