/**
 * Labeled image datasets on disk: one subdirectory per class label,
 * PNG images inside.  Enumeration order is stable (sorted class dirs,
 * sorted filenames), so row indices line up with externally produced
 * subset index files.
 */
import fs from 'node:fs'
import path from 'node:path'
import { PNG } from 'pngjs'

export interface DatasetSample {
  /** class-relative path, used as the sample id */
  id: string
  label: string
  file: string
}

export interface DecodedImage {
  width: number
  height: number
  /** HWC float32 pixels scaled to [0, 1] */
  pixels: Float32Array
}

export function listSamples(root: string): DatasetSample[] {
  if (!fs.existsSync(root) || !fs.statSync(root).isDirectory()) {
    throw new Error(`dataset directory not found: ${root}`)
  }
  const labels = fs
    .readdirSync(root)
    .filter((d) => fs.statSync(path.join(root, d)).isDirectory())
    .sort()
  const samples: DatasetSample[] = []
  for (const label of labels) {
    const files = fs
      .readdirSync(path.join(root, label))
      .filter((f) => f.toLowerCase().endsWith('.png'))
      .sort()
    for (const f of files) {
      samples.push({
        id: `${label}/${f}`,
        label,
        file: path.join(root, label, f),
      })
    }
  }
  if (samples.length === 0) {
    throw new Error(`no PNG samples under ${root} (expected <root>/<label>/*.png)`)
  }
  return samples
}

export function decodeImage(file: string): DecodedImage {
  let png: PNG
  try {
    png = PNG.sync.read(fs.readFileSync(file))
  } catch (err) {
    throw new Error(`unreadable image ${file}: ${(err as Error).message}`)
  }
  const { width, height, data } = png
  const pixels = new Float32Array(width * height * 3)
  for (let i = 0; i < width * height; i++) {
    pixels[i * 3] = data[i * 4] / 255
    pixels[i * 3 + 1] = data[i * 4 + 1] / 255
    pixels[i * 3 + 2] = data[i * 4 + 2] / 255
  }
  return { width, height, pixels }
}
