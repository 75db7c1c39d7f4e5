export interface PairRecord {
  review_id: string;
  target: string | null;
  category: string;
  auxiliary_text: string;
  sentence_text: string;
  gold_label: string;
  fallback_used: boolean;
}

export interface PredictionRecord {
  review_id: string;
  target: string | null;
  category: string;
  scores: Record<string, number>;
  predicted: string;
}

export const ABSA_LABELS = ['none', 'negative', 'neutral', 'positive', 'conflict'] as const;
export const TABSA_LABELS = ['none', 'negative', 'positive'] as const;

export function labelsForTask(task: string): string[] {
  if (task === 'absa') return [...ABSA_LABELS];
  if (task === 'tabsa') return [...TABSA_LABELS];
  throw new Error(`unknown task '${task}' (expected absa or tabsa)`);
}

export interface EncoderConfig {
  layers: number;        // 12 full-scale, 4 in small mode
  hidden: number;        // 768 full-scale
  heads: number;
  ffn: number;           // feed-forward inner size
  pyramidLayers: number; // top layers feeding the prediction head: 4, or 2 in small mode
}

export interface TrainerConfig {
  task: 'absa' | 'tabsa';
  learningRate: number;  // 3e-5 at full scale; toy runs use a larger rate
  batchSize: number;     // 32
  epochs: number;        // 3
  maxSteps: number;      // hard cap; 0 means epochs decide
  dropout: number;       // 0.1
  maxLen: number;        // 128
  rngSeed: number;
  finalPrediction: 'top' | 'mean'; // read logits from the added layer, or average all heads
  encoder: EncoderConfig;
}

export const SMALL_ENCODER: EncoderConfig = {
  layers: 4,
  hidden: 64,
  heads: 4,
  ffn: 128,
  pyramidLayers: 2,
};

export const BASE_ENCODER: EncoderConfig = {
  layers: 12,
  hidden: 768,
  heads: 12,
  ffn: 3072,
  pyramidLayers: 4,
};

export function defaultConfig(partial: Partial<TrainerConfig> = {}): TrainerConfig {
  const { encoder, ...rest } = partial;
  return {
    task: 'absa',
    learningRate: 3e-5,
    batchSize: 32,
    epochs: 3,
    maxSteps: 0,
    dropout: 0.1,
    maxLen: 128,
    rngSeed: 13,
    finalPrediction: 'top',
    ...rest,
    encoder: { ...SMALL_ENCODER, ...(encoder ?? {}) },
  };
}
