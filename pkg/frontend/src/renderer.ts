/** Dependency-free preview renderer: flat-shaded painter's algorithm on a
 * 2D canvas. Fidelity is deliberately modest; the panel exists to judge
 * scale, orientation, and anchor placement, not materials. */

import { MeshInstance } from "./glb.js";
import { MannequinMesh } from "./mannequin.js";
import { Pose, } from "./trajectory.js";
import { Vec3, quatToMatrix3 } from "./mathkit.js";

export interface Marker {
  position: Vec3;
  label: string;
  color: string;
  selected: boolean;
}

export interface SceneContent {
  instances: MeshInstance[];
  objectPose: Pose | null; // trajectory playback offset for the object
  mannequin: MannequinMesh | null;
  mannequinOffset: Vec3;
  markers: Marker[];
}

interface Tri {
  depth: number;
  points: [number, number][];
  shade: number;
  color: [number, number, number];
}

export class Viewport {
  yaw = 0.7;
  pitch = 0.35;
  distance = 3.2;
  targetY = 0.6;

  private dragging = false;
  private lastX = 0;
  private lastY = 0;

  constructor(private canvas: HTMLCanvasElement) {
    canvas.addEventListener("pointerdown", (e) => {
      this.dragging = true;
      this.lastX = e.clientX;
      this.lastY = e.clientY;
      canvas.setPointerCapture(e.pointerId);
    });
    canvas.addEventListener("pointermove", (e) => {
      if (!this.dragging) return;
      this.yaw += (e.clientX - this.lastX) * 0.01;
      this.pitch = Math.max(
        -1.4,
        Math.min(1.4, this.pitch + (e.clientY - this.lastY) * 0.01),
      );
      this.lastX = e.clientX;
      this.lastY = e.clientY;
    });
    canvas.addEventListener("pointerup", () => (this.dragging = false));
    canvas.addEventListener("wheel", (e) => {
      e.preventDefault();
      this.distance = Math.max(0.5, Math.min(30, this.distance * (1 + e.deltaY * 0.001)));
    });
  }

  private project(p: Vec3): [number, number, number] {
    const cy = Math.cos(this.yaw);
    const sy = Math.sin(this.yaw);
    const cp = Math.cos(this.pitch);
    const sp = Math.sin(this.pitch);
    const x = p[0] * cy - p[2] * sy;
    const z0 = p[0] * sy + p[2] * cy;
    const y0 = p[1] - this.targetY;
    const y = y0 * cp - z0 * sp;
    const z = y0 * sp + z0 * cp + this.distance;
    const f = (0.9 * this.canvas.height) / Math.max(z, 0.05);
    return [
      this.canvas.width / 2 + x * f,
      this.canvas.height / 2 - y * f,
      z,
    ];
  }

  render(scene: SceneContent): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    ctx.fillStyle = "#181c22";
    ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
    this.drawGrid(ctx);

    const tris: Tri[] = [];
    for (const instance of scene.instances) {
      this.gather(
        instance.positions,
        instance.indices,
        [150, 170, 210],
        scene.objectPose,
        [0, 0, 0],
        tris,
      );
    }
    if (scene.mannequin) {
      this.gather(
        scene.mannequin.positions,
        scene.mannequin.indices,
        [120, 190, 140],
        null,
        scene.mannequinOffset,
        tris,
      );
    }
    tris.sort((a, b) => b.depth - a.depth);
    for (const tri of tris) {
      const [r, g, b] = tri.color;
      ctx.fillStyle = `rgb(${(r * tri.shade) | 0},${(g * tri.shade) | 0},${(b * tri.shade) | 0})`;
      ctx.beginPath();
      ctx.moveTo(tri.points[0][0], tri.points[0][1]);
      ctx.lineTo(tri.points[1][0], tri.points[1][1]);
      ctx.lineTo(tri.points[2][0], tri.points[2][1]);
      ctx.closePath();
      ctx.fill();
    }

    for (const marker of scene.markers) {
      const [x, y] = this.project(marker.position);
      ctx.strokeStyle = marker.color;
      ctx.lineWidth = marker.selected ? 3 : 1.5;
      ctx.beginPath();
      ctx.arc(x, y, marker.selected ? 9 : 6, 0, Math.PI * 2);
      ctx.stroke();
      ctx.fillStyle = marker.color;
      ctx.font = "12px sans-serif";
      ctx.fillText(marker.label, x + 10, y - 8);
    }
  }

  private gather(
    positions: Float32Array,
    indices: Uint32Array,
    color: [number, number, number],
    pose: Pose | null,
    offset: Vec3,
    out: Tri[],
  ): void {
    const rot = pose ? quatToMatrix3(pose.rotation) : null;
    const move = pose ? pose.translation : [0, 0, 0];
    const world = (i: number): Vec3 => {
      let p: Vec3 = [positions[3 * i], positions[3 * i + 1], positions[3 * i + 2]];
      if (rot) {
        p = [
          rot[0] * p[0] + rot[1] * p[1] + rot[2] * p[2] + move[0],
          rot[3] * p[0] + rot[4] * p[1] + rot[5] * p[2] + move[1],
          rot[6] * p[0] + rot[7] * p[1] + rot[8] * p[2] + move[2],
        ];
      }
      return [p[0] + offset[0], p[1] + offset[1], p[2] + offset[2]];
    };
    for (let i = 0; i < indices.length; i += 3) {
      const a = world(indices[i]);
      const b = world(indices[i + 1]);
      const c = world(indices[i + 2]);
      const nx = (b[1] - a[1]) * (c[2] - a[2]) - (b[2] - a[2]) * (c[1] - a[1]);
      const ny = (b[2] - a[2]) * (c[0] - a[0]) - (b[0] - a[0]) * (c[2] - a[2]);
      const nz = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
      const len = Math.hypot(nx, ny, nz) || 1;
      const shade = 0.45 + 0.55 * Math.abs((nx * 0.4 + ny * 0.8 + nz * 0.45) / len);
      const pa = this.project(a);
      const pb = this.project(b);
      const pc = this.project(c);
      out.push({
        depth: (pa[2] + pb[2] + pc[2]) / 3,
        points: [
          [pa[0], pa[1]],
          [pb[0], pb[1]],
          [pc[0], pc[1]],
        ],
        shade,
        color,
      });
    }
  }

  private drawGrid(ctx: CanvasRenderingContext2D): void {
    ctx.strokeStyle = "#2a3038";
    ctx.lineWidth = 1;
    for (let i = -5; i <= 5; i++) {
      const a = this.project([i * 0.5, 0, -2.5]);
      const b = this.project([i * 0.5, 0, 2.5]);
      const c = this.project([-2.5, 0, i * 0.5]);
      const d = this.project([2.5, 0, i * 0.5]);
      ctx.beginPath();
      ctx.moveTo(a[0], a[1]);
      ctx.lineTo(b[0], b[1]);
      ctx.moveTo(c[0], c[1]);
      ctx.lineTo(d[0], d[1]);
      ctx.stroke();
    }
  }
}
