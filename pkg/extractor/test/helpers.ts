import fs from 'node:fs'
import path from 'node:path'
import * as tf from '@tensorflow/tfjs'
import { PNG } from 'pngjs'
import { saveBackbone } from '../src/backbone.js'

/** deterministic 32-bit PRNG so fixtures are stable across runs */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0
  return () => {
    a = (a + 0x6d2b79f5) >>> 0
    let t = a
    t = Math.imul(t ^ (t >>> 15), t | 1)
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61)
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296
  }
}

export function makeToyBackbone(channels: number, inputSize: number): tf.LayersModel {
  const model = tf.sequential()
  model.add(
    tf.layers.conv2d({
      filters: 8,
      kernelSize: 3,
      activation: 'relu',
      inputShape: [inputSize, inputSize, 3],
    }),
  )
  model.add(tf.layers.conv2d({ filters: channels, kernelSize: 3 }))
  const rand = mulberry32(7)
  model.setWeights(
    model.getWeights().map((w) => {
      const n = w.size
      const values = new Float32Array(n)
      for (let i = 0; i < n; i++) values[i] = (rand() - 0.5) * 0.2
      return tf.tensor(values, w.shape)
    }),
  )
  return model
}

export async function saveToyBackbone(
  dir: string,
  channels = 512,
  inputSize = 16,
): Promise<tf.LayersModel> {
  const model = makeToyBackbone(channels, inputSize)
  await saveBackbone(model, dir)
  return model
}

export function makeToyDataset(
  root: string,
  labels: string[],
  perClass: number,
  size = 16,
): void {
  const rand = mulberry32(11)
  for (const label of labels) {
    fs.mkdirSync(path.join(root, label), { recursive: true })
    for (let i = 0; i < perClass; i++) {
      const png = new PNG({ width: size, height: size })
      for (let p = 0; p < size * size; p++) {
        png.data[p * 4] = Math.floor(rand() * 256)
        png.data[p * 4 + 1] = Math.floor(rand() * 256)
        png.data[p * 4 + 2] = Math.floor(rand() * 256)
        png.data[p * 4 + 3] = 255
      }
      fs.writeFileSync(
        path.join(root, label, `img_${i}.png`),
        PNG.sync.write(png),
      )
    }
  }
}
