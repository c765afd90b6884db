/** Playback of the server-computed preview trajectory. The client never
 * simulates physics; it only interpolates the stored samples, so the user
 * sees exactly the motion the pipeline validated. */

import { Quat, Vec3, quatNlerp } from "./mathkit.js";

export interface TrajectorySample {
  t: number;
  translation: Vec3;
  rotation: Quat;
}

export function parseTrajectory(payload: ArrayBuffer | string): TrajectorySample[] {
  const text =
    typeof payload === "string" ? payload : new TextDecoder().decode(payload);
  const data = JSON.parse(text);
  return (data.samples ?? []).map((s: any) => ({
    t: s.t,
    translation: s.translation as Vec3,
    rotation: s.rotation as Quat,
  }));
}

export interface Pose {
  translation: Vec3;
  rotation: Quat;
}

/** Sample the trajectory at an arbitrary time, looping past the end. */
export function poseAt(samples: TrajectorySample[], time: number): Pose {
  if (samples.length === 0) {
    return { translation: [0, 0, 0], rotation: [0, 0, 0, 1] };
  }
  const duration = samples[samples.length - 1].t;
  let t = duration > 0 ? time % duration : 0;
  if (t < 0) t += duration;

  let lo = 0;
  let hi = samples.length - 1;
  while (hi - lo > 1) {
    const mid = (lo + hi) >> 1;
    if (samples[mid].t <= t) lo = mid;
    else hi = mid;
  }
  const a = samples[lo];
  const b = samples[hi];
  const spanT = b.t - a.t;
  const alpha = spanT > 0 ? (t - a.t) / spanT : 0;
  return {
    translation: [
      a.translation[0] + (b.translation[0] - a.translation[0]) * alpha,
      a.translation[1] + (b.translation[1] - a.translation[1]) * alpha,
      a.translation[2] + (b.translation[2] - a.translation[2]) * alpha,
    ],
    rotation: quatNlerp(a.rotation, b.rotation, alpha),
  };
}
