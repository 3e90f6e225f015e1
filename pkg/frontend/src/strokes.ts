// Pure raster drawing model: strokes in, pixels out.
//
// Kept free of DOM types so undo and geometry are unit-testable; painter.ts
// binds this to a real <canvas> and pointer events.

export interface Point {
  x: number;
  y: number;
}

export type Tool = "brush" | "eraser";

export interface Stroke {
  tool: Tool;
  color: string;
  size: number;
  points: Point[];
}

export class StrokeDoc {
  readonly width: number;
  readonly height: number;
  private strokes: Stroke[] = [];
  private current: Stroke | null = null;

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
  }

  begin(tool: Tool, color: string, size: number, at: Point): void {
    this.current = { tool, color, size, points: [at] };
  }

  extend(at: Point): void {
    if (this.current) this.current.points.push(at);
  }

  end(): void {
    if (this.current && this.current.points.length > 0) {
      this.strokes.push(this.current);
    }
    this.current = null;
  }

  undo(): boolean {
    if (this.current) {
      this.current = null;
      return true;
    }
    return this.strokes.pop() !== undefined;
  }

  clear(): void {
    this.strokes = [];
    this.current = null;
  }

  get strokeCount(): number {
    return this.strokes.length;
  }

  get isEmpty(): boolean {
    return this.strokes.length === 0 && this.current === null;
  }

  /** Strokes to draw, including the one in progress. */
  visible(): Stroke[] {
    return this.current ? [...this.strokes, this.current] : [...this.strokes];
  }
}

type Ctx2D = Pick<
  CanvasRenderingContext2D,
  | "fillStyle" | "fillRect" | "strokeStyle" | "lineWidth" | "lineCap" | "lineJoin"
  | "beginPath" | "moveTo" | "lineTo" | "stroke" | "globalCompositeOperation" | "arc" | "fill"
>;

/** Draw the strokes onto whatever is already on the surface. */
export function renderStrokes(doc: StrokeDoc, ctx: Ctx2D): void {
  for (const stroke of doc.visible()) {
    ctx.globalCompositeOperation = stroke.tool === "eraser" ? "destination-out" : "source-over";
    ctx.strokeStyle = stroke.color;
    ctx.lineWidth = stroke.size;
    ctx.lineCap = "round";
    ctx.lineJoin = "round";
    if (stroke.points.length === 1) {
      const p = stroke.points[0];
      ctx.fillStyle = stroke.tool === "eraser" ? "#000000" : stroke.color;
      ctx.beginPath();
      ctx.arc(p.x, p.y, stroke.size / 2, 0, Math.PI * 2);
      ctx.fill();
      continue;
    }
    ctx.beginPath();
    ctx.moveTo(stroke.points[0].x, stroke.points[0].y);
    for (const p of stroke.points.slice(1)) ctx.lineTo(p.x, p.y);
    ctx.stroke();
  }
  // erasing leaves transparency; flatten back onto white for export fidelity
  ctx.globalCompositeOperation = "destination-over";
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, doc.width, doc.height);
  ctx.globalCompositeOperation = "source-over";
}

/** White background plus strokes: the plain-drawing render path. */
export function renderDoc(doc: StrokeDoc, ctx: Ctx2D): void {
  ctx.globalCompositeOperation = "source-over";
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, doc.width, doc.height);
  renderStrokes(doc, ctx);
}
