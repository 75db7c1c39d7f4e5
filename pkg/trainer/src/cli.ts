import { initBackend } from './backend.js';
import { loadCheckpoint } from './checkpoint.js';
import { readPairs, writePredictions } from './io.js';
import { predictPairs } from './predict.js';
import { runTrainCli } from './train.js';
import { BASE_ENCODER, SMALL_ENCODER, defaultConfig, TrainerConfig } from './types.js';

function parseArgs(argv: string[]): Record<string, string> {
  const out: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith('--') || i + 1 >= argv.length) {
      throw new Error(`expected --flag value pairs, got '${argv.slice(i).join(' ')}'`);
    }
    out[key.slice(2)] = argv[i + 1];
  }
  return out;
}

function need(args: Record<string, string>, key: string): string {
  const value = args[key];
  if (!value) throw new Error(`missing required --${key}`);
  return value;
}

export function configFromJson(raw: Record<string, unknown>): TrainerConfig {
  const { encoder, ...rest } = raw as { encoder?: Record<string, unknown> };
  const base = typeof encoder === 'string'
    ? (encoder === 'base' ? BASE_ENCODER : SMALL_ENCODER)
    : undefined;
  return defaultConfig({
    ...(rest as Partial<TrainerConfig>),
    encoder: base ?? (encoder as TrainerConfig['encoder'] | undefined),
  });
}

async function main(): Promise<void> {
  const [command, ...rest] = process.argv.slice(2);
  if (command === 'train') {
    const args = parseArgs(rest);
    console.log(`backend: ${await initBackend()}`);
    runTrainCli(need(args, 'pairs'), args.config ?? null, need(args, 'out'),
      readPairs, configFromJson);
    return;
  }
  if (command === 'predict') {
    const args = parseArgs(rest);
    console.log(`backend: ${await initBackend()}`);
    const ckpt = loadCheckpoint(need(args, 'ckpt'));
    const pairs = readPairs(need(args, 'pairs'));
    const predictions = predictPairs(ckpt, pairs);
    const n = writePredictions(need(args, 'out'), predictions);
    console.log(`wrote ${n} predictions to ${args.out}`);
    return;
  }
  console.error('usage: cli.ts train --pairs <f> [--config <f>] --out <dir>\n' +
    '       cli.ts predict --ckpt <dir> --pairs <f> --out <f>');
  process.exitCode = 2;
}

main().catch((e) => {
  console.error(`error: ${e.message}`);
  process.exitCode = 1;
});
