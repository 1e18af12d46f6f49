// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

import init, { temperature_map, magnet_map, relaxation_curve } from "./pkg/qbath_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function colour(t) {
  // White to dark red.
  const s = Math.max(0, Math.min(1, t));
  return [255, Math.round(255 * (1 - s)), Math.round(255 * (1 - s) * (1 - 0.6 * s))];
}

// values are row-major with the outer index drawn bottom to top.
function heatmap(canvas, values, n) {
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(n, n);
  const max = values.reduce((m, v) => (Number.isNaN(v) ? m : Math.max(m, v)), 0);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const v = values[i * n + j];
      const rgb = Number.isNaN(v) ? [200, 200, 200] : colour(max > 0 ? v / max : 0);
      const k = 4 * ((n - 1 - i) * n + j);
      img.data.set([...rgb, 255], k);
    }
  }
  const off = new OffscreenCanvas(n, n);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
  return max;
}

function timed(status, f) {
  const t0 = performance.now();
  try {
    f();
    $(status).textContent = `${(performance.now() - t0).toFixed(0)} ms`;
  } catch (e) {
    $(status).textContent = String(e);
  }
}

function drawTemperatureMap() {
  $("tm-fe-v").textContent = num("tm-fe").toFixed(3);
  timed("tm-status", () => {
    const n = num("tm-n");
    const v = temperature_map(num("tm-fe"), num("tm-span"), n);
    $("tm-max").textContent = heatmap($("tm"), v, n).toFixed(4);
  });
}

function drawMagnetMap() {
  timed("mm-status", () => {
    const n = num("mm-n");
    const v = magnet_map(num("mm-ratio"), num("mm-bmin"), num("mm-bmax"), num("mm-rmin"), num("mm-rmax"), n);
    $("mm-max").textContent = heatmap($("mm"), v, n).toFixed(4);
  });
}

function drawRelaxation() {
  timed("rc-status", () => {
    const v = relaxation_curve(num("rc-b"), 0.01, num("rc-rmax"), 300);
    const canvas = $("rc");
    const ctx = canvas.getContext("2d");
    const w = canvas.width, h = canvas.height;
    ctx.clearRect(0, 0, w, h);
    const pts = [];
    for (let k = 0; k < v.length; k += 3) pts.push({ r: v[k], gap: v[k + 1], c: v[k + 2] });
    const rmax = pts[pts.length - 1].r;
    const gaps = pts.filter((p) => p.gap > 0).map((p) => Math.log10(p.gap));
    const lo = Math.min(...gaps), hi = Math.max(...gaps);
    const cmax = Math.max(1e-12, ...pts.map((p) => (Number.isNaN(p.c) ? 0 : p.c)));
    const line = (style, y) => {
      ctx.strokeStyle = style;
      ctx.beginPath();
      let started = false;
      for (const p of pts) {
        const yy = y(p);
        if (!Number.isFinite(yy)) { started = false; continue; }
        const x = (p.r / rmax) * w;
        if (started) ctx.lineTo(x, yy); else ctx.moveTo(x, yy);
        started = true;
      }
      ctx.stroke();
    };
    line("#1f77b4", (p) => h - 10 - ((Math.log10(p.gap) - lo) / (hi - lo || 1)) * (h - 20));
    line("#ff7f0e", (p) => h - 10 - (p.c / cmax) * (h - 20));
  });
}

await init();
$("tm-fe").addEventListener("input", drawTemperatureMap);
$("tm-span").addEventListener("change", drawTemperatureMap);
$("tm-n").addEventListener("change", drawTemperatureMap);
$("mm-go").addEventListener("click", drawMagnetMap);
$("rc-go").addEventListener("click", drawRelaxation);
drawTemperatureMap();
drawMagnetMap();
drawRelaxation();
