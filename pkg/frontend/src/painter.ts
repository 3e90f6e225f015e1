// Binds the stroke model to a real canvas with pointer events and a toolbar.

import { StrokeDoc, renderStrokes, type Tool } from "./strokes.js";

export const CANVAS_SIZE = 512;

export class Painter {
  doc = new StrokeDoc(CANVAS_SIZE, CANVAS_SIZE);
  tool: Tool = "brush";
  color = "#1c1c1c";
  size = 6;
  locked = false;
  private background: ImageBitmap | null = null;
  private drawing = false;

  constructor(readonly canvas: HTMLCanvasElement) {
    canvas.width = CANVAS_SIZE;
    canvas.height = CANVAS_SIZE;
    canvas.addEventListener("pointerdown", (e) => this.down(e));
    canvas.addEventListener("pointermove", (e) => this.move(e));
    window.addEventListener("pointerup", () => this.up());
    this.repaint();
  }

  private at(e: PointerEvent) {
    const rect = this.canvas.getBoundingClientRect();
    return {
      x: ((e.clientX - rect.left) / rect.width) * CANVAS_SIZE,
      y: ((e.clientY - rect.top) / rect.height) * CANVAS_SIZE,
    };
  }

  private down(e: PointerEvent): void {
    if (this.locked) return;
    this.canvas.setPointerCapture(e.pointerId);
    this.drawing = true;
    this.doc.begin(this.tool, this.color, this.size, this.at(e));
    this.repaint();
  }

  private move(e: PointerEvent): void {
    if (!this.drawing || this.locked) return;
    this.doc.extend(this.at(e));
    this.repaint();
  }

  private up(): void {
    if (!this.drawing) return;
    this.drawing = false;
    this.doc.end();
    this.repaint();
  }

  undo(): void {
    if (!this.locked && this.doc.undo()) this.repaint();
  }

  clear(): void {
    if (this.locked) return;
    this.doc.clear();
    this.background = null;
    this.repaint();
  }

  repaint(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    ctx.globalCompositeOperation = "source-over";
    ctx.clearRect(0, 0, CANVAS_SIZE, CANVAS_SIZE);
    ctx.fillStyle = "#ffffff";
    ctx.fillRect(0, 0, CANVAS_SIZE, CANVAS_SIZE);
    if (this.background) {
      const scale = Math.min(CANVAS_SIZE / this.background.width, CANVAS_SIZE / this.background.height);
      const w = this.background.width * scale;
      const h = this.background.height * scale;
      ctx.drawImage(this.background, (CANVAS_SIZE - w) / 2, (CANVAS_SIZE - h) / 2, w, h);
    }
    renderStrokes(this.doc, ctx);
  }

  /** Export the current picture as PNG bytes for the upload endpoint. */
  exportPng(): Promise<Blob> {
    this.repaint();
    return new Promise((resolve, reject) => {
      this.canvas.toBlob((blob) => {
        if (blob) resolve(blob);
        else reject(new Error("canvas export failed"));
      }, "image/png");
    });
  }

  /** Bring in an image file as the drawing's background layer. */
  async importImage(file: File): Promise<void> {
    if (this.locked) return;
    this.background = await createImageBitmap(file);
    this.repaint();
  }
}
