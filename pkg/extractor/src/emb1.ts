/**
 * EMB1 binary embedding files.
 *
 * Layout: 4-byte magic "EMB1"; little-endian u32 sample count N, u32
 * feature dim C, u32 byte length of the id/label table; then, per row,
 * a length-prefixed (u32) UTF-8 sample id and a length-prefixed UTF-8
 * label; then N*C little-endian float32 row values.
 */
import fs from 'node:fs'

export const EMB1_MAGIC = 'EMB1'

export interface EmbeddingRecord {
  id: string
  label: string
  values: Float32Array
}

export function encodeEmb1(records: EmbeddingRecord[]): Buffer {
  if (records.length === 0) {
    throw new Error('EMB1 requires at least one sample')
  }
  const dim = records[0].values.length
  if (dim < 1) {
    throw new Error('EMB1 requires at least one feature per sample')
  }
  for (const r of records) {
    if (r.values.length !== dim) {
      throw new Error(
        `row ${r.id} has ${r.values.length} values, expected ${dim}`,
      )
    }
  }

  const tableParts: Buffer[] = []
  for (const r of records) {
    for (const s of [r.id, r.label]) {
      const raw = Buffer.from(s, 'utf-8')
      const len = Buffer.alloc(4)
      len.writeUInt32LE(raw.length)
      tableParts.push(len, raw)
    }
  }
  const table = Buffer.concat(tableParts)

  const header = Buffer.alloc(16)
  header.write(EMB1_MAGIC, 0, 'ascii')
  header.writeUInt32LE(records.length, 4)
  header.writeUInt32LE(dim, 8)
  header.writeUInt32LE(table.length, 12)

  const data = Buffer.alloc(records.length * dim * 4)
  records.forEach((r, i) => {
    for (let j = 0; j < dim; j++) {
      data.writeFloatLE(r.values[j], (i * dim + j) * 4)
    }
  })

  return Buffer.concat([header, table, data])
}

export function writeEmb1(path: string, records: EmbeddingRecord[]): void {
  fs.writeFileSync(path, encodeEmb1(records))
}

export function readEmb1(path: string): EmbeddingRecord[] {
  const buf = fs.readFileSync(path)
  if (buf.subarray(0, 4).toString('ascii') !== EMB1_MAGIC) {
    throw new Error(`${path}: bad magic at byte 0`)
  }
  const n = buf.readUInt32LE(4)
  const dim = buf.readUInt32LE(8)
  const tableLen = buf.readUInt32LE(12)
  let offset = 16
  const records: EmbeddingRecord[] = []
  const strings: string[] = []
  const tableEnd = 16 + tableLen
  while (offset < tableEnd) {
    const len = buf.readUInt32LE(offset)
    offset += 4
    strings.push(buf.subarray(offset, offset + len).toString('utf-8'))
    offset += len
  }
  if (strings.length !== 2 * n) {
    throw new Error(`${path}: expected ${2 * n} table strings, got ${strings.length}`)
  }
  if (buf.length - tableEnd !== n * dim * 4) {
    throw new Error(`${path}: row data length mismatch at byte ${tableEnd}`)
  }
  for (let i = 0; i < n; i++) {
    const values = new Float32Array(dim)
    for (let j = 0; j < dim; j++) {
      values[j] = buf.readFloatLE(tableEnd + (i * dim + j) * 4)
    }
    records.push({ id: strings[2 * i], label: strings[2 * i + 1], values })
  }
  return records
}
