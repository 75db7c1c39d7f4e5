import * as fs from 'node:fs';
import * as path from 'node:path';
import * as tf from '@tensorflow/tfjs';
import { PairClassifier } from './model.js';
import { WordTokenizer } from './tokenizer.js';
import { TrainerConfig, defaultConfig } from './types.js';

export interface Checkpoint {
  model: PairClassifier;
  tokenizer: WordTokenizer;
  labels: string[];
  config: TrainerConfig;
}

export function saveCheckpoint(dir: string, model: PairClassifier, tokenizer: WordTokenizer,
                               labels: string[]): void {
  fs.mkdirSync(dir, { recursive: true });
  const weights: Record<string, { shape: number[]; data: number[] }> = {};
  for (const [name, variable] of model.vars) {
    weights[name] = { shape: variable.shape as number[], data: [...variable.dataSync()] };
  }
  fs.writeFileSync(path.join(dir, 'weights.json'), JSON.stringify(weights));
  fs.writeFileSync(path.join(dir, 'config.json'),
    JSON.stringify({ config: model.cfg, labels, vocab: tokenizer.idToToken }, null, 2));
}

export function loadCheckpoint(dir: string): Checkpoint {
  const meta = JSON.parse(fs.readFileSync(path.join(dir, 'config.json'), 'utf-8'));
  const config = defaultConfig(meta.config);
  const tokenizer = new WordTokenizer(meta.vocab);
  const model = new PairClassifier(config, tokenizer.vocabSize, meta.labels.length);
  const weights = JSON.parse(fs.readFileSync(path.join(dir, 'weights.json'), 'utf-8'));
  for (const [name, variable] of model.vars) {
    const stored = weights[name];
    if (!stored) throw new Error(`checkpoint missing weights for ${name}`);
    variable.assign(tf.tensor(stored.data, stored.shape));
  }
  return { model, tokenizer, labels: meta.labels, config };
}
