/** Minimal GLB reader: enough of the binary glTF 2.0 container to render
 * previews and measure bounds. Decodes float32 POSITION attributes and
 * uint8/16/32 indices of the default scene; everything else is kept as the
 * raw JSON tree (the vendor extensions live there). */

import {
  Mat4,
  Vec3,
  mat4FromGltf,
  mat4Identity,
  mat4Multiply,
  transformPoint,
  trsMatrix,
} from "./mathkit.js";

const MAGIC = 0x46546c67; // "glTF"
const CHUNK_JSON = 0x4e4f534a;
const CHUNK_BIN = 0x004e4942;

export interface GlbDocument {
  json: any;
  binary: Uint8Array;
}

export interface MeshInstance {
  positions: Float32Array; // flat xyz triples, world space
  indices: Uint32Array; // triangle list
}

export function parseGlb(data: ArrayBuffer): GlbDocument {
  const view = new DataView(data);
  if (data.byteLength < 12 || view.getUint32(0, true) !== MAGIC) {
    throw new Error("not a GLB container");
  }
  const version = view.getUint32(4, true);
  if (version !== 2) throw new Error(`unsupported GLB version ${version}`);
  const total = view.getUint32(8, true);
  if (total > data.byteLength) throw new Error("container truncated");

  let offset = 12;
  let json: any = null;
  let binary = new Uint8Array(0);
  while (offset < total) {
    const length = view.getUint32(offset, true);
    const type = view.getUint32(offset + 4, true);
    const chunk = new Uint8Array(data, offset + 8, length);
    if (type === CHUNK_JSON) {
      json = JSON.parse(new TextDecoder().decode(chunk));
    } else if (type === CHUNK_BIN) {
      binary = chunk;
    }
    offset += 8 + length;
  }
  if (json === null) throw new Error("missing JSON chunk");
  return { json, binary };
}

function accessorArray(doc: GlbDocument, index: number): Float32Array | Uint32Array {
  const acc = doc.json.accessors[index];
  const viewDef = doc.json.bufferViews[acc.bufferView];
  const start =
    doc.binary.byteOffset + (viewDef.byteOffset ?? 0) + (acc.byteOffset ?? 0);
  const count = acc.count;
  const componentCounts: Record<string, number> = {
    SCALAR: 1, VEC2: 2, VEC3: 3, VEC4: 4,
  };
  const n = componentCounts[acc.type];
  const buffer = doc.binary.buffer;
  switch (acc.componentType) {
    case 5126:
      return new Float32Array(buffer, start, count * n);
    case 5125:
      return new Uint32Array(buffer, start, count * n);
    case 5123:
      return Uint32Array.from(new Uint16Array(buffer, start, count * n));
    case 5121:
      return Uint32Array.from(new Uint8Array(buffer, start, count * n));
    default:
      throw new Error(`unsupported componentType ${acc.componentType}`);
  }
}

function nodeMatrix(node: any): Mat4 {
  if (node.matrix) return mat4FromGltf(node.matrix);
  return trsMatrix(
    node.translation ?? [0, 0, 0],
    node.rotation ?? [0, 0, 0, 1],
    node.scale ?? [1, 1, 1],
  );
}

/** World-space triangle geometry of the default scene. */
export function meshInstances(doc: GlbDocument): MeshInstance[] {
  const out: MeshInstance[] = [];
  const scene = doc.json.scenes[doc.json.scene ?? 0];
  const visit = (index: number, parent: Mat4) => {
    const node = doc.json.nodes[index];
    const world = mat4Multiply(parent, nodeMatrix(node));
    if (node.mesh !== undefined) {
      for (const prim of doc.json.meshes[node.mesh].primitives ?? []) {
        const posIndex = prim.attributes?.POSITION;
        if (posIndex === undefined) continue;
        const local = accessorArray(doc, posIndex) as Float32Array;
        const positions = new Float32Array(local.length);
        for (let i = 0; i < local.length; i += 3) {
          const p = transformPoint(world, [local[i], local[i + 1], local[i + 2]]);
          positions[i] = p[0];
          positions[i + 1] = p[1];
          positions[i + 2] = p[2];
        }
        const indices =
          prim.indices !== undefined
            ? (accessorArray(doc, prim.indices) as Uint32Array)
            : Uint32Array.from({ length: local.length / 3 }, (_, i) => i);
        out.push({ positions, indices });
      }
    }
    for (const child of node.children ?? []) visit(child, world);
  };
  for (const root of scene.nodes ?? []) visit(root, mat4Identity());
  return out;
}

export interface Bounds {
  min: Vec3;
  max: Vec3;
}

export function worldBounds(doc: GlbDocument): Bounds | null {
  let seen = false;
  const min: Vec3 = [Infinity, Infinity, Infinity];
  const max: Vec3 = [-Infinity, -Infinity, -Infinity];
  for (const instance of meshInstances(doc)) {
    const p = instance.positions;
    for (let i = 0; i < p.length; i += 3) {
      for (let k = 0; k < 3; k++) {
        if (p[i + k] < min[k]) min[k] = p[i + k];
        if (p[i + k] > max[k]) max[k] = p[i + k];
      }
      seen = true;
    }
  }
  return seen ? { min, max } : null;
}

export function longestSpan(bounds: Bounds): number {
  return Math.max(
    bounds.max[0] - bounds.min[0],
    bounds.max[1] - bounds.min[1],
    bounds.max[2] - bounds.min[2],
  );
}

export function interactionExtension(doc: GlbDocument): any {
  return doc.json.extensions?.VENDOR_interaction_points ?? null;
}

export function behaviorExtension(doc: GlbDocument): any {
  return doc.json.extensions?.VENDOR_behavior ?? null;
}
