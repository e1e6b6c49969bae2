#!/usr/bin/env node
/**
 * extract --dataset <dir> --backbone <dir> --out <file.emb>
 *         [--batch-size <n>] [--device <name>]
 */
import { extract } from './extract.js'

function usage(): never {
  console.error(
    'usage: extract --dataset <dir> --backbone <dir> --out <file.emb> ' +
      '[--batch-size <n>] [--device <name>]',
  )
  process.exit(2)
}

function parseArgs(argv: string[]) {
  const opts: Record<string, string> = {}
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i]
    const value = argv[i + 1]
    if (!flag.startsWith('--') || value === undefined) usage()
    opts[flag.slice(2)] = value
  }
  const known = new Set(['dataset', 'backbone', 'out', 'batch-size', 'device'])
  for (const key of Object.keys(opts)) {
    if (!known.has(key)) usage()
  }
  if (!opts.dataset || !opts.backbone || !opts.out) usage()
  return opts
}

async function main() {
  const opts = parseArgs(process.argv.slice(2))
  try {
    const summary = await extract({
      dataset: opts.dataset,
      backbone: opts.backbone,
      out: opts.out,
      batchSize: opts['batch-size'] ? Number(opts['batch-size']) : undefined,
      device: opts.device,
    })
    console.error(
      `wrote ${summary.samples} x ${summary.channels} embeddings to ${opts.out} ` +
        `(weights sha256 ${summary.weightsHash.slice(0, 12)}...)`,
    )
  } catch (err) {
    console.error(`extract: error: ${(err as Error).message}`)
    process.exit(1)
  }
}

main()
