/**
 * Local backbone storage.  A backbone directory holds `model.json`
 * (layers topology plus weight specs) and `weights.bin` (raw weight
 * data); no network access is needed to load one.
 */
import crypto from 'node:crypto'
import fs from 'node:fs'
import path from 'node:path'
import * as tf from '@tensorflow/tfjs'

export async function saveBackbone(
  model: tf.LayersModel,
  dir: string,
): Promise<void> {
  fs.mkdirSync(dir, { recursive: true })
  await model.save(
    tf.io.withSaveHandler(async (artifacts) => {
      fs.writeFileSync(
        path.join(dir, 'model.json'),
        JSON.stringify(
          {
            modelTopology: artifacts.modelTopology,
            weightSpecs: artifacts.weightSpecs,
          },
          null,
          2,
        ),
      )
      fs.writeFileSync(
        path.join(dir, 'weights.bin'),
        Buffer.from(artifacts.weightData as ArrayBuffer),
      )
      return { modelArtifactsInfo: { dateSaved: new Date(), modelTopologyType: 'JSON' } }
    }),
  )
}

export async function loadBackbone(dir: string): Promise<tf.LayersModel> {
  const modelPath = path.join(dir, 'model.json')
  const weightsPath = path.join(dir, 'weights.bin')
  for (const p of [modelPath, weightsPath]) {
    if (!fs.existsSync(p)) {
      throw new Error(`backbone file missing: ${p}`)
    }
  }
  const { modelTopology, weightSpecs } = JSON.parse(
    fs.readFileSync(modelPath, 'utf-8'),
  )
  const weightData = fs.readFileSync(weightsPath)
  return tf.loadLayersModel(
    tf.io.fromMemory({
      modelTopology,
      weightSpecs,
      weightData: weightData.buffer.slice(
        weightData.byteOffset,
        weightData.byteOffset + weightData.byteLength,
      ),
    }),
  )
}

export function backboneWeightsHash(dir: string): string {
  return crypto
    .createHash('sha256')
    .update(fs.readFileSync(path.join(dir, 'weights.bin')))
    .digest('hex')
}
