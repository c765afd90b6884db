/** Fixed low-poly humanoid reference, exactly 1.70 m tall, used purely as a
 * visual size/pose anchor next to the generated object. The seated pose
 * folds the legs so the hip rests at 0.765 m (0.45 x height), matching the
 * alignment constant the pipeline documents for its sit points. */

export const MANNEQUIN_HEIGHT_M = 1.7;
export const SEATED_HIP_HEIGHT_M = 0.45 * MANNEQUIN_HEIGHT_M;

export interface MannequinMesh {
  positions: Float32Array; // flat xyz triples
  indices: Uint32Array;
}

interface BoxSpec {
  size: [number, number, number];
  center: [number, number, number];
}

function box(spec: BoxSpec, positions: number[], indices: number[]): void {
  const [sx, sy, sz] = spec.size.map((v) => v / 2);
  const [cx, cy, cz] = spec.center;
  const base = positions.length / 3;
  const corners = [
    [-sx, -sy, -sz], [sx, -sy, -sz], [sx, sy, -sz], [-sx, sy, -sz],
    [-sx, -sy, sz], [sx, -sy, sz], [sx, sy, sz], [-sx, sy, sz],
  ];
  for (const [x, y, z] of corners) positions.push(cx + x, cy + y, cz + z);
  const faces = [
    [0, 2, 1], [0, 3, 2], [4, 5, 6], [4, 6, 7],
    [0, 1, 5], [0, 5, 4], [3, 7, 6], [3, 6, 2],
    [0, 4, 7], [0, 7, 3], [1, 2, 6], [1, 6, 5],
  ];
  for (const face of faces) indices.push(base + face[0], base + face[1], base + face[2]);
}

const LEG_LENGTH = SEATED_HIP_HEIGHT_M; // standing hip matches the alignment height
const TORSO_TOP = 1.45;
const HEAD_SIZE = 0.22;

export function mannequinMesh(seated: boolean): MannequinMesh {
  const positions: number[] = [];
  const indices: number[] = [];

  const hipY = seated ? SEATED_HIP_HEIGHT_M : LEG_LENGTH;

  if (seated) {
    // thighs forward, shins down: hip stays at the seated alignment height
    box({ size: [0.14, 0.14, 0.45], center: [-0.11, hipY, 0.21] }, positions, indices);
    box({ size: [0.14, 0.14, 0.45], center: [0.11, hipY, 0.21] }, positions, indices);
    box({ size: [0.13, hipY, 0.13], center: [-0.11, hipY / 2, 0.38] }, positions, indices);
    box({ size: [0.13, hipY, 0.13], center: [0.11, hipY / 2, 0.38] }, positions, indices);
  } else {
    box({ size: [0.15, LEG_LENGTH, 0.15], center: [-0.11, LEG_LENGTH / 2, 0] }, positions, indices);
    box({ size: [0.15, LEG_LENGTH, 0.15], center: [0.11, LEG_LENGTH / 2, 0] }, positions, indices);
  }

  const torsoBottom = hipY;
  const torsoHeight = TORSO_TOP - LEG_LENGTH;
  const torsoCenter = seated
    ? hipY + torsoHeight / 2
    : torsoBottom + torsoHeight / 2;
  box(
    { size: [0.42, torsoHeight, 0.2], center: [0, torsoCenter, 0] },
    positions,
    indices,
  );

  const armY = torsoCenter + torsoHeight * 0.2;
  box({ size: [0.1, 0.55, 0.1], center: [-0.28, armY - 0.2, 0] }, positions, indices);
  box({ size: [0.1, 0.55, 0.1], center: [0.28, armY - 0.2, 0] }, positions, indices);

  // head top lands exactly on the reference height when standing
  const headCenter = seated
    ? torsoCenter + torsoHeight / 2 + HEAD_SIZE / 2 + 0.03
    : MANNEQUIN_HEIGHT_M - HEAD_SIZE / 2;
  box(
    { size: [HEAD_SIZE, HEAD_SIZE, HEAD_SIZE], center: [0, headCenter, 0] },
    positions,
    indices,
  );

  return {
    positions: Float32Array.from(positions),
    indices: Uint32Array.from(indices),
  };
}

export function mannequinHeight(mesh: MannequinMesh): number {
  let min = Infinity;
  let max = -Infinity;
  for (let i = 1; i < mesh.positions.length; i += 3) {
    min = Math.min(min, mesh.positions[i]);
    max = Math.max(max, mesh.positions[i]);
  }
  return max - min;
}
