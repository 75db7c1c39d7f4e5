import * as tf from '@tensorflow/tfjs';
import { EncodedPair } from './tokenizer.js';
import { TrainerConfig } from './types.js';

/**
 * Small transformer encoder for sentence pairs with a layer-pyramid head.
 *
 * The encoder runs `layers` standard blocks (pre-norm MHA + FFN).  The head
 * reads the top `pyramidLayers` block outputs, adds ONE extra block whose
 * input is a projection of the previous and current top states concatenated,
 * and attaches a classifier to each of those states ([CLS] position).  All
 * per-layer logits enter the loss with equal weight; the served prediction
 * comes from the added block (or the mean of all heads, behind a config
 * flag).
 */
export class PairClassifier {
  readonly cfg: TrainerConfig;
  readonly vocabSize: number;
  readonly numLabels: number;
  readonly vars = new Map<string, tf.Variable>();
  private seedCounter: number;

  constructor(cfg: TrainerConfig, vocabSize: number, numLabels: number) {
    this.cfg = cfg;
    this.vocabSize = vocabSize;
    this.numLabels = numLabels;
    this.seedCounter = cfg.rngSeed;
    this.build();
  }

  private nextSeed(): number {
    return this.seedCounter++;
  }

  private weight(name: string, shape: number[], std = 0.02): tf.Variable {
    const init = tf.randomNormal(shape, 0, std, 'float32', this.nextSeed());
    const v = tf.variable(init, true, name);
    init.dispose();
    this.vars.set(name, v);
    return v;
  }

  private zeros(name: string, shape: number[]): tf.Variable {
    const v = tf.variable(tf.zeros(shape), true, name);
    this.vars.set(name, v);
    return v;
  }

  private ones(name: string, shape: number[]): tf.Variable {
    const v = tf.variable(tf.ones(shape), true, name);
    this.vars.set(name, v);
    return v;
  }

  private build(): void {
    const { hidden, ffn, layers, pyramidLayers } = this.cfg.encoder;
    this.weight('emb/token', [this.vocabSize, hidden]);
    this.weight('emb/position', [this.cfg.maxLen, hidden]);
    this.weight('emb/segment', [2, hidden]);
    this.ones('emb/ln_g', [hidden]);
    this.zeros('emb/ln_b', [hidden]);
    for (let i = 0; i < layers; i++) this.buildBlock(`enc${i}`, hidden, ffn);
    // the added top block consumes concat(previous, current) projected back to hidden
    this.weight('pyramid/fuse_w', [2 * hidden, hidden]);
    this.zeros('pyramid/fuse_b', [hidden]);
    this.buildBlock('pyramid/block', hidden, ffn);
    for (let i = 0; i < pyramidLayers; i++) {
      this.weight(`head${i}/w`, [hidden, this.numLabels]);
      this.zeros(`head${i}/b`, [this.numLabels]);
    }
    this.weight('head_top/w', [hidden, this.numLabels]);
    this.zeros('head_top/b', [this.numLabels]);
  }

  private buildBlock(prefix: string, hidden: number, ffn: number): void {
    this.weight(`${prefix}/wq`, [hidden, hidden]);
    this.zeros(`${prefix}/bq`, [hidden]);
    this.weight(`${prefix}/wk`, [hidden, hidden]);
    this.zeros(`${prefix}/bk`, [hidden]);
    this.weight(`${prefix}/wv`, [hidden, hidden]);
    this.zeros(`${prefix}/bv`, [hidden]);
    this.weight(`${prefix}/wo`, [hidden, hidden]);
    this.zeros(`${prefix}/bo`, [hidden]);
    this.ones(`${prefix}/ln1_g`, [hidden]);
    this.zeros(`${prefix}/ln1_b`, [hidden]);
    this.weight(`${prefix}/ff1_w`, [hidden, ffn]);
    this.zeros(`${prefix}/ff1_b`, [ffn]);
    this.weight(`${prefix}/ff2_w`, [ffn, hidden]);
    this.zeros(`${prefix}/ff2_b`, [hidden]);
    this.ones(`${prefix}/ln2_g`, [hidden]);
    this.zeros(`${prefix}/ln2_b`, [hidden]);
  }

  v(name: string): tf.Variable {
    const found = this.vars.get(name);
    if (!found) throw new Error(`no variable named ${name}`);
    return found;
  }

  trainableVariables(): tf.Variable[] {
    return [...this.vars.values()];
  }

  addedLayerVariables(): tf.Variable[] {
    return [...this.vars.entries()]
      .filter(([name]) => name.startsWith('pyramid/'))
      .map(([, variable]) => variable);
  }

  private layerNorm(x: tf.Tensor, gamma: tf.Variable, beta: tf.Variable): tf.Tensor {
    const { mean, variance } = tf.moments(x, -1, true);
    return tf.add(tf.mul(tf.div(tf.sub(x, mean), tf.sqrt(tf.add(variance, 1e-6))), gamma), beta);
  }

  private gelu(x: tf.Tensor): tf.Tensor {
    const c = Math.sqrt(2 / Math.PI);
    const inner = tf.mul(tf.add(x, tf.mul(tf.pow(x, 3), 0.044715)), c);
    return tf.mul(tf.mul(x, tf.add(tf.tanh(inner), 1)), 0.5);
  }

  private block(prefix: string, x: tf.Tensor, attnMask: tf.Tensor, training: boolean): tf.Tensor {
    const { heads, hidden } = this.cfg.encoder;
    const dh = hidden / heads;
    const [b, t] = [x.shape[0]!, x.shape[1]!];

    const split = (y: tf.Tensor) =>
      tf.transpose(tf.reshape(y, [b, t, heads, dh]), [0, 2, 1, 3]); // [B,h,T,dh]

    const q = split(tf.add(tf.matMul(x.reshape([b * t, hidden]), this.v(`${prefix}/wq`)), this.v(`${prefix}/bq`)).reshape([b, t, hidden]));
    const k = split(tf.add(tf.matMul(x.reshape([b * t, hidden]), this.v(`${prefix}/wk`)), this.v(`${prefix}/bk`)).reshape([b, t, hidden]));
    const vv = split(tf.add(tf.matMul(x.reshape([b * t, hidden]), this.v(`${prefix}/wv`)), this.v(`${prefix}/bv`)).reshape([b, t, hidden]));

    let scores = tf.div(tf.matMul(q, k, false, true), Math.sqrt(dh)); // [B,h,T,T]
    scores = tf.add(scores, attnMask);
    const attn = tf.softmax(scores, -1);
    let ctx = tf.matMul(attn, vv); // [B,h,T,dh]
    ctx = tf.reshape(tf.transpose(ctx, [0, 2, 1, 3]), [b, t, hidden]);
    let out = tf.add(tf.matMul(ctx.reshape([b * t, hidden]), this.v(`${prefix}/wo`)), this.v(`${prefix}/bo`)).reshape([b, t, hidden]);
    if (training && this.cfg.dropout > 0) out = tf.dropout(out, this.cfg.dropout, undefined, this.nextSeed());
    const h1 = this.layerNorm(tf.add(x, out), this.v(`${prefix}/ln1_g`) , this.v(`${prefix}/ln1_b`));

    let ff = tf.add(tf.matMul(h1.reshape([b * t, hidden]), this.v(`${prefix}/ff1_w`)), this.v(`${prefix}/ff1_b`));
    ff = this.gelu(ff);
    ff = tf.add(tf.matMul(ff, this.v(`${prefix}/ff2_w`)), this.v(`${prefix}/ff2_b`)).reshape([b, t, hidden]);
    if (training && this.cfg.dropout > 0) ff = tf.dropout(ff, this.cfg.dropout, undefined, this.nextSeed());
    return this.layerNorm(tf.add(h1, ff), this.v(`${prefix}/ln2_g`), this.v(`${prefix}/ln2_b`));
  }

  /** Per-head logits for a batch: pyramidLayers entries plus the added block's. */
  logits(batch: EncodedPair[], training: boolean): tf.Tensor[] {
    const { hidden, layers, pyramidLayers } = this.cfg.encoder;
    const b = batch.length;
    const t = batch[0].ids.length;
    const ids = tf.tensor1d(batch.flatMap((e) => e.ids), 'int32');
    const segs = tf.tensor1d(batch.flatMap((e) => e.segments), 'int32');
    const mask = tf.tensor2d(batch.map((e) => e.mask), [b, t], 'float32');

    // embedding lookups as one-hot matmuls: differentiable on every backend
    const tokens = tf.matMul(tf.oneHot(ids, this.vocabSize), this.v('emb/token'))
      .reshape([b, t, hidden]);
    const positions = tf.slice(this.v('emb/position'), [0, 0], [t, hidden]).expandDims(0);
    const segments = tf.matMul(tf.oneHot(segs, 2), this.v('emb/segment'))
      .reshape([b, t, hidden]);
    let x = this.layerNorm(tf.add(tf.add(tokens, positions), segments),
                           this.v('emb/ln_g'), this.v('emb/ln_b'));
    if (training && this.cfg.dropout > 0) x = tf.dropout(x, this.cfg.dropout, undefined, this.nextSeed());

    // additive attention mask: 0 on real tokens, -1e9 on padding
    const attnMask = tf.mul(tf.sub(mask, 1), 1e9).reshape([b, 1, 1, t]);

    const states: tf.Tensor[] = [];
    for (let i = 0; i < layers; i++) {
      x = this.block(`enc${i}`, x, attnMask, training);
      states.push(x);
    }
    const top = states.slice(-pyramidLayers);

    const prev = top[top.length - 2] ?? top[top.length - 1];
    const curr = top[top.length - 1];
    const fused = tf.add(
      tf.matMul(tf.concat([prev, curr], -1).reshape([b * t, 2 * hidden]), this.v('pyramid/fuse_w')),
      this.v('pyramid/fuse_b'),
    ).reshape([b, t, hidden]);
    const added = this.block('pyramid/block', fused, attnMask, training);

    const clsOf = (st: tf.Tensor) => tf.reshape(tf.slice(st, [0, 0, 0], [b, 1, hidden]), [b, hidden]);
    const heads: tf.Tensor[] = top.map((st, i) =>
      tf.add(tf.matMul(clsOf(st), this.v(`head${i}/w`)), this.v(`head${i}/b`)));
    heads.push(tf.add(tf.matMul(clsOf(added), this.v('head_top/w')), this.v('head_top/b')));
    return heads;
  }

  /** Cross-entropy averaged over every pyramid head (equal weights). */
  loss(batch: EncodedPair[], labelIds: number[], training: boolean): tf.Scalar {
    const onehot = tf.oneHot(tf.tensor1d(labelIds, 'int32'), this.numLabels);
    const heads = this.logits(batch, training);
    const losses = heads.map((lg) => tf.losses.softmaxCrossEntropy(onehot, lg) as tf.Scalar);
    return tf.div(tf.addN(losses), losses.length) as tf.Scalar;
  }

  /** Probability rows for serving, from the configured head. */
  probabilities(batch: EncodedPair[]): tf.Tensor {
    return tf.tidy(() => {
      const heads = this.logits(batch, false);
      if (this.cfg.finalPrediction === 'mean') {
        return tf.softmax(tf.div(tf.addN(heads), heads.length), -1);
      }
      return tf.softmax(heads[heads.length - 1], -1);
    });
  }

  dispose(): void {
    for (const v of this.vars.values()) v.dispose();
    this.vars.clear();
  }
}
