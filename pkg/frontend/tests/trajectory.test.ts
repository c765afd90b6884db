import { describe, expect, it } from "vitest";

import { parseTrajectory, poseAt } from "../src/trajectory.js";
import { mannequinHeight, mannequinMesh, MANNEQUIN_HEIGHT_M, SEATED_HIP_HEIGHT_M } from "../src/mannequin.js";

describe("trajectory playback", () => {
  const samples = parseTrajectory(
    JSON.stringify({
      samples: [
        { t: 0, translation: [0, 0, 0], rotation: [0, 0, 0, 1] },
        { t: 1, translation: [1, 0, 0], rotation: [0, 0, 0, 1] },
        { t: 2, translation: [1, 2, 0], rotation: [0, 1, 0, 0] },
      ],
    }),
  );

  it("interpolates between stored samples", () => {
    expect(poseAt(samples, 0.5).translation).toEqual([0.5, 0, 0]);
    expect(poseAt(samples, 1.5).translation).toEqual([1, 1, 0]);
  });

  it("hits stored samples exactly", () => {
    expect(poseAt(samples, 1).translation).toEqual([1, 0, 0]);
  });

  it("loops past the last sample", () => {
    expect(poseAt(samples, 2.5).translation).toEqual([0.5, 0, 0]);
  });

  it("normalizes interpolated rotations", () => {
    const q = poseAt(samples, 1.5).rotation;
    expect(Math.hypot(q[0], q[1], q[2], q[3])).toBeCloseTo(1, 12);
  });

  it("handles empty trajectories", () => {
    expect(poseAt([], 3).translation).toEqual([0, 0, 0]);
  });
});

describe("mannequin reference", () => {
  it("stands 1.70 m tall (float32 vertex precision)", () => {
    expect(mannequinHeight(mannequinMesh(false))).toBeCloseTo(MANNEQUIN_HEIGHT_M, 6);
  });

  it("uses the 0.765 m seated hip alignment", () => {
    expect(SEATED_HIP_HEIGHT_M).toBeCloseTo(0.765, 12);
    // seated pose folds the legs forward: deeper in +z, hip height unchanged
    const zMax = (mesh: { positions: Float32Array }) => {
      let max = -Infinity;
      for (let i = 2; i < mesh.positions.length; i += 3) {
        max = Math.max(max, mesh.positions[i]);
      }
      return max;
    };
    expect(zMax(mannequinMesh(true))).toBeGreaterThan(zMax(mannequinMesh(false)));
  });
});
