import { execFileSync } from 'node:child_process';
import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';
import { beforeAll, describe, expect, it } from 'vitest';
import { initBackend } from '../src/backend.js';
import { loadCheckpoint, saveCheckpoint } from '../src/checkpoint.js';
import { writePredictions } from '../src/io.js';
import { predictPairs } from '../src/predict.js';
import { trainModel, trainingAccuracy } from '../src/train.js';
import { defaultConfig } from '../src/types.js';
import { TOY_ENCODER, toyPairs } from './toydata.js';

beforeAll(async () => {
  await initBackend();
});

function toyConfig(overrides = {}) {
  return defaultConfig({
    task: 'tabsa',
    learningRate: 3e-3,
    batchSize: 16,
    epochs: 100,
    maxSteps: 150,
    dropout: 0.1,
    maxLen: 24,
    rngSeed: 3,
    encoder: TOY_ENCODER,
    ...overrides,
  });
}

describe('toy fine-tune', () => {
  it('reaches >= 0.9 training accuracy within 200 steps on 64 separable pairs', () => {
    const pairs = toyPairs(64);
    const result = trainModel(pairs, toyConfig({ maxSteps: 200 }));
    expect(result.lossLog.length).toBeLessThanOrEqual(200);
    expect(result.lossLog.at(-1)!.loss).toBeLessThan(result.lossLog[0].loss);
    const accuracy = trainingAccuracy(result, pairs);
    expect(accuracy).toBeGreaterThanOrEqual(0.9);
    result.model.dispose();
  });

  it('loss falls within 50 steps', () => {
    const pairs = toyPairs(64);
    const result = trainModel(pairs, toyConfig({ maxSteps: 50 }));
    expect(result.lossLog).toHaveLength(50);
    expect(result.lossLog.at(-1)!.loss).toBeLessThan(result.lossLog[0].loss);
    result.model.dispose();
  });

  it('collapses to near-zero loss on single-class data', () => {
    const pairs = toyPairs(32).map((p) => ({ ...p, gold_label: 'positive' }));
    const result = trainModel(pairs, toyConfig({ maxSteps: 80 }));
    expect(result.lossLog.at(-1)!.loss).toBeLessThan(0.05);
    result.model.dispose();
  });

  it('rejects labels outside the task set', () => {
    const pairs = toyPairs(8);
    pairs[0] = { ...pairs[0], gold_label: 'conflict' };
    expect(() => trainModel(pairs, toyConfig())).toThrow(/outside the tabsa label set/);
  });
});

describe('prediction export', () => {
  it('round-trips through a checkpoint and scores end-to-end', () => {
    const tmp = fs.mkdtempSync(path.join(os.tmpdir(), 'trainer-'));
    const pairs = toyPairs(64).map((p) => ({ ...p, target: null }));
    const config = toyConfig({ task: 'absa' as const, maxSteps: 150 });
    const result = trainModel(pairs, config);

    const ckptDir = path.join(tmp, 'ckpt');
    saveCheckpoint(ckptDir, result.model, result.tokenizer, result.labels);
    const restored = loadCheckpoint(ckptDir);

    const fresh = predictPairs(restored, pairs);
    const original = predictPairs(
      { model: result.model, tokenizer: result.tokenizer, labels: result.labels, config },
      pairs);
    expect(fresh).toHaveLength(pairs.length);
    fresh.forEach((p, i) => {
      expect(p.predicted).toBe(original[i].predicted);
      const total = Object.values(p.scores).reduce((a, b) => a + b, 0);
      expect(total).toBeCloseTo(1.0, 6);
      expect(Object.keys(p.scores).sort()).toEqual(
        ['conflict', 'negative', 'neutral', 'none', 'positive']);
    });

    // exported records are sorted by unit key and score through the evaluator CLI
    const predsFile = path.join(tmp, 'preds.jsonl');
    writePredictions(predsFile, fresh);
    const keys = fs.readFileSync(predsFile, 'utf-8').trim().split('\n')
      .map((l) => JSON.parse(l).review_id);
    expect(keys).toEqual([...keys].sort());

    const goldFile = path.join(tmp, 'pairs.jsonl');
    fs.writeFileSync(goldFile, pairs.map((p) => JSON.stringify(p)).join('\n') + '\n');
    const out = execFileSync('python3',
      ['-m', 'aspectaux.cli', 'score', '--preds', predsFile, '--gold', goldFile,
       '--task', 'absa', '--out-dir', path.join(tmp, 'report'), '--no-figures'],
      { encoding: 'utf-8' });
    expect(out).toContain('report files written');
    const report = JSON.parse(
      fs.readFileSync(path.join(tmp, 'report', 'report.json'), 'utf-8'));
    expect(report.task).toBe('absa');
    expect(report.metrics.f1).toBeGreaterThan(0.9); // memorized separable data
    restored.model.dispose();
    result.model.dispose();
    fs.rmSync(tmp, { recursive: true, force: true });
  });

  it('emits one record per unit for a five-aspect review', () => {
    const base = toyPairs(3)[0];
    const categories = ['food', 'price', 'service', 'ambience', 'anecdotes'];
    const units = categories.map((cat) => ({ ...base, category: cat }));
    const pairs = toyPairs(32);
    const result = trainModel(pairs, toyConfig({ maxSteps: 20 }));
    const config = toyConfig({ maxSteps: 20 });
    const preds = predictPairs(
      { model: result.model, tokenizer: result.tokenizer, labels: result.labels, config },
      units);
    expect(preds).toHaveLength(5);
    expect(new Set(preds.map((p) => p.category)).size).toBe(5);
    result.model.dispose();
  });
});
