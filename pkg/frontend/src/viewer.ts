export interface ViewTransform {
  scale: number;
  offsetX: number;
  offsetY: number;
}

export const MIN_SCALE = 1;
export const MAX_SCALE = 16;

export function identityTransform(): ViewTransform {
  return { scale: 1, offsetX: 0, offsetY: 0 };
}

/**
 * Zoom about a fixed viewport point so the pixel under the cursor stays put.
 * Scale is clamped to [MIN_SCALE, MAX_SCALE]; at scale 1 the offsets reset so
 * the image always fills the viewport exactly.
 */
export function zoomAt(t: ViewTransform, factor: number,
                       cx: number, cy: number): ViewTransform {
  const scale = Math.min(MAX_SCALE, Math.max(MIN_SCALE, t.scale * factor));
  if (scale === 1) {
    return identityTransform();
  }
  const ratio = scale / t.scale;
  return {
    scale,
    offsetX: cx - ratio * (cx - t.offsetX),
    offsetY: cy - ratio * (cy - t.offsetY),
  };
}

export function pan(t: ViewTransform, dx: number, dy: number): ViewTransform {
  if (t.scale === 1) {
    return t;
  }
  return { ...t, offsetX: t.offsetX + dx, offsetY: t.offsetY + dy };
}

export function toCss(t: ViewTransform): string {
  return `translate(${t.offsetX}px, ${t.offsetY}px) scale(${t.scale})`;
}

/**
 * Fixed-viewport pan/zoom for the rating image. Wheel zooms about the
 * cursor, drag pans; no image enhancement of any kind is applied.
 */
export class PanZoomViewer {
  transform: ViewTransform = identityTransform();
  private dragging = false;
  private lastX = 0;
  private lastY = 0;

  constructor(private viewport: HTMLElement, private image: HTMLImageElement) {
    viewport.addEventListener('wheel', (e) => this.onWheel(e), { passive: false });
    viewport.addEventListener('mousedown', (e) => this.onMouseDown(e));
    window.addEventListener('mousemove', (e) => this.onMouseMove(e));
    window.addEventListener('mouseup', () => { this.dragging = false; });
  }

  reset(): void {
    this.transform = identityTransform();
    this.apply();
  }

  private onWheel(e: WheelEvent): void {
    e.preventDefault();
    const rect = this.viewport.getBoundingClientRect();
    const factor = e.deltaY < 0 ? 1.2 : 1 / 1.2;
    this.transform = zoomAt(this.transform, factor,
                            e.clientX - rect.left, e.clientY - rect.top);
    this.apply();
  }

  private onMouseDown(e: MouseEvent): void {
    this.dragging = true;
    this.lastX = e.clientX;
    this.lastY = e.clientY;
  }

  private onMouseMove(e: MouseEvent): void {
    if (!this.dragging) {
      return;
    }
    this.transform = pan(this.transform, e.clientX - this.lastX,
                         e.clientY - this.lastY);
    this.lastX = e.clientX;
    this.lastY = e.clientY;
    this.apply();
  }

  private apply(): void {
    this.image.style.transform = toCss(this.transform);
    this.image.style.transformOrigin = '0 0';
  }
}
