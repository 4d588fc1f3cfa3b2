import { describe, expect, it } from 'vitest';
import { MAX_SCALE, identityTransform, pan, toCss, zoomAt } from '../src/viewer.js';

describe('zoomAt', () => {
  it('keeps the cursor-anchored image point fixed', () => {
    const t0 = zoomAt(identityTransform(), 2, 100, 50);
    // image point under (100, 50): (p - offset) / scale must be unchanged
    expect((100 - t0.offsetX) / t0.scale).toBeCloseTo(100);
    expect((50 - t0.offsetY) / t0.scale).toBeCloseTo(50);
    const t1 = zoomAt(t0, 1.5, 30, 80);
    expect((30 - t1.offsetX) / t1.scale).toBeCloseTo((30 - t0.offsetX) / t0.scale);
    expect((80 - t1.offsetY) / t1.scale).toBeCloseTo((80 - t0.offsetY) / t0.scale);
  });

  it('clamps scale and resets to identity at minimum', () => {
    let t = identityTransform();
    for (let i = 0; i < 40; i++) {
      t = zoomAt(t, 2, 10, 10);
    }
    expect(t.scale).toBe(MAX_SCALE);
    t = pan(t, 37, -12);
    for (let i = 0; i < 40; i++) {
      t = zoomAt(t, 0.5, 10, 10);
    }
    expect(t).toEqual(identityTransform());
  });

  it('zooming out from identity stays at identity', () => {
    expect(zoomAt(identityTransform(), 0.5, 0, 0)).toEqual(identityTransform());
  });
});

describe('pan', () => {
  it('is a no-op at scale 1 so the image fills the viewport', () => {
    expect(pan(identityTransform(), 15, 20)).toEqual(identityTransform());
  });

  it('accumulates offsets when zoomed in', () => {
    let t = zoomAt(identityTransform(), 4, 0, 0);
    t = pan(t, 10, -5);
    t = pan(t, 2, 3);
    expect(t.offsetX).toBeCloseTo(12);
    expect(t.offsetY).toBeCloseTo(-2);
  });
});

describe('toCss', () => {
  it('emits a translate-then-scale transform', () => {
    expect(toCss({ scale: 2, offsetX: 5, offsetY: -3 }))
      .toBe('translate(5px, -3px) scale(2)');
  });
});
