/**
 * Inference-only feature extraction: feed every dataset image through a
 * local backbone, average the last feature map over its spatial axes,
 * and write the pooled vectors as an EMB1 file (plus a JSON sidecar
 * recording the backbone weight hash).
 */
import fs from 'node:fs'
import * as tf from '@tensorflow/tfjs'
import { backboneWeightsHash, loadBackbone } from './backbone.js'
import { decodeImage, listSamples } from './dataset.js'
import { EmbeddingRecord, writeEmb1 } from './emb1.js'

export interface ExtractionJob {
  dataset: string
  backbone: string
  out: string
  batchSize?: number
  /** only 'cpu' is supported; anything else falls back with a warning */
  device?: string
}

export interface ExtractionSummary {
  samples: number
  channels: number
  weightsHash: string
}

export async function extract(job: ExtractionJob): Promise<ExtractionSummary> {
  const batchSize = job.batchSize ?? 32
  if (batchSize < 1) {
    throw new Error(`batch size must be >= 1, got ${batchSize}`)
  }
  if (job.device && job.device !== 'cpu') {
    console.warn(`device ${job.device} unavailable, using cpu`)
  }

  const samples = listSamples(job.dataset)
  const model = await loadBackbone(job.backbone)
  const inputShape = model.inputs[0].shape // [null, H, W, 3]
  const [, height, width] = inputShape

  const records: EmbeddingRecord[] = []
  for (let start = 0; start < samples.length; start += batchSize) {
    const batch = samples.slice(start, start + batchSize)
    const images = batch.map((s) => {
      const img = decodeImage(s.file)
      if (img.height !== height || img.width !== width) {
        throw new Error(
          `image ${s.file} is ${img.height}x${img.width}, backbone expects ${height}x${width}`,
        )
      }
      return img
    })
    const pooled = tf.tidy(() => {
      const input = tf.tensor4d(
        images.flatMap((img) => Array.from(img.pixels)),
        [batch.length, height as number, width as number, 3],
      )
      let features = model.predict(input) as tf.Tensor
      if (features.rank === 4) {
        // NHWC feature map: arithmetic mean over the spatial axes
        features = features.mean([1, 2])
      } else if (features.rank !== 2) {
        throw new Error(
          `backbone output must be a spatial map or a vector, got rank ${features.rank}`,
        )
      }
      return features as tf.Tensor2D
    })
    const values = (await pooled.array()) as number[][]
    pooled.dispose()
    batch.forEach((s, i) => {
      records.push({
        id: s.id,
        label: s.label,
        values: Float32Array.from(values[i]),
      })
    })
  }

  writeEmb1(job.out, records)
  const weightsHash = backboneWeightsHash(job.backbone)
  const channels = records[0].values.length
  fs.writeFileSync(
    `${job.out}.meta.json`,
    JSON.stringify(
      {
        dataset: job.dataset,
        backbone: job.backbone,
        backboneWeightsSha256: weightsHash,
        samples: records.length,
        channels,
      },
      null,
      2,
    ) + '\n',
  )
  return { samples: records.length, channels, weightsHash }
}
