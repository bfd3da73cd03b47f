import init, { differenceScan, doubleSumScan, bracketGrid, mertensEnvelope } from "./pkg/mertens_demo.js";

const PAD = 40;

function status(id, text, isError = false) {
  const el = document.getElementById(id);
  el.textContent = text;
  el.classList.toggle("error", isError);
}

// Run `work`, report elapsed time or the error message.
function timed(id, work) {
  status(id, "computing…");
  setTimeout(() => {
    const t0 = performance.now();
    try {
      const note = work();
      status(id, `${note} in ${(performance.now() - t0).toFixed(0)} ms`);
    } catch (e) {
      status(id, String(e.message ?? e), true);
    }
  }, 0);
}

function axes(ctx, w, h) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(PAD, PAD / 2);
  ctx.lineTo(PAD, h - PAD);
  ctx.lineTo(w - PAD / 2, h - PAD);
  ctx.stroke();
}

// Exponent and running sup against log10(n), y in [0, 1].
function plotExponents(canvas, records) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  axes(ctx, w, h);
  const pts = records.filter((r) => r.exponent !== null);
  if (!pts.length) return;
  const lx = pts.map((r) => Math.log10(r.n));
  const x0 = Math.min(...lx), x1 = Math.max(...lx, x0 + 1e-9);
  const sx = (v) => PAD + ((v - x0) / (x1 - x0)) * (w - 1.5 * PAD);
  const sy = (v) => h - PAD - Math.min(Math.max(v, 0), 1) * (h - 1.5 * PAD);

  ctx.setLineDash([4, 4]);
  ctx.strokeStyle = "#aaa";
  ctx.beginPath();
  ctx.moveTo(PAD, sy(0.5));
  ctx.lineTo(w - PAD / 2, sy(0.5));
  ctx.stroke();
  ctx.setLineDash([]);

  for (const [key, colour] of [["exponent", "#36c"], ["running_sup", "#c63"]]) {
    ctx.strokeStyle = colour;
    ctx.beginPath();
    pts.forEach((r, i) => {
      const [x, y] = [sx(lx[i]), sy(r[key])];
      i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
    });
    ctx.stroke();
  }

  ctx.fillStyle = "#555";
  ctx.fillText("1", 8, sy(1) + 4);
  ctx.fillText("½", 8, sy(0.5) + 4);
  ctx.fillText("0", 8, sy(0) + 4);
  ctx.fillText(`10^${x0.toFixed(1)}`, PAD, h - PAD + 16);
  ctx.fillText(`10^${x1.toFixed(1)}`, w - PAD * 2, h - PAD + 16);
  ctx.fillStyle = "#36c";
  ctx.fillText("exponent", w - 160, PAD);
  ctx.fillStyle = "#c63";
  ctx.fillText("running sup", w - 90, PAD);
}

function num(form, name) {
  return Number(form.elements[name].value);
}

function onSubmit(id, handler) {
  const form = document.getElementById(id);
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    handler(form);
  });
  return form;
}

function drawGrid(canvas, cells, size) {
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(size, size);
  let total = 0;
  cells.forEach((c, i) => {
    const rgb = c === 1 ? [50, 100, 200] : c === 2 ? [200, 60, 50] : [255, 255, 255];
    total += c === 1 ? 1 : c === 2 ? -1 : 0;
    img.data.set([...rgb, 255], 4 * i);
  });
  canvas.width = canvas.height = size;
  ctx.putImageData(img, 0, 0);
  return total;
}

function drawWalk(canvas, env) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  axes(ctx, w, h);
  const lo = Math.min(...env), hi = Math.max(...env);
  const span = Math.max(hi - lo, 1);
  const sy = (v) => h - PAD - ((v - lo) / span) * (h - 1.5 * PAD);
  const buckets = env.length / 2;
  ctx.strokeStyle = "#364";
  for (let i = 0; i < buckets; i++) {
    const x = PAD + ((i + 0.5) / buckets) * (w - 1.5 * PAD);
    ctx.beginPath();
    ctx.moveTo(x, sy(env[2 * i]));
    ctx.lineTo(x, sy(env[2 * i + 1]) - 0.5);
    ctx.stroke();
  }
  ctx.fillStyle = "#555";
  ctx.fillText(String(hi), 4, sy(hi) + 4);
  ctx.fillText(String(lo), 4, sy(lo));
  if (lo < 0 && hi > 0) {
    ctx.strokeStyle = "#ccc";
    ctx.beginPath();
    ctx.moveTo(PAD, sy(0));
    ctx.lineTo(w - PAD / 2, sy(0));
    ctx.stroke();
  }
}

await init();

const d = onSubmit("d-form", (f) =>
  timed("d-status", () => {
    const records = JSON.parse(differenceScan(num(f, "xmax"), num(f, "per")));
    plotExponents(document.getElementById("d-plot"), records);
    const last = records[records.length - 1];
    return `${records.length} points, D(${last.n}) = ${last.magnitude}, sup exponent ${last.running_sup ?? "–"}`;
  })
);

const s = onSubmit("s-form", (f) =>
  timed("s-status", () => {
    const records = JSON.parse(doubleSumScan(num(f, "nmin"), num(f, "nmax"), num(f, "stride")));
    plotExponents(document.getElementById("s-plot"), records);
    const last = records[records.length - 1];
    return `${records.length} values, S(${last.n}) = ${last.magnitude}`;
  })
);

const b = onSubmit("b-form", (f) =>
  timed("b-status", () => {
    const size = num(f, "size");
    const total = drawGrid(document.getElementById("b-plot"), bracketGrid(num(f, "m"), size), size);
    return `${size}×${size} cells, signed total ${total}`;
  })
);

const walk = onSubmit("w-form", (f) =>
  timed("w-status", () => {
    const canvas = document.getElementById("w-plot");
    const env = mertensEnvelope(num(f, "xmax"), canvas.width - 2 * PAD);
    drawWalk(canvas, Array.from(env));
    return `${env.length / 2} buckets`;
  })
);

for (const form of [d, s, b, walk]) form.requestSubmit();
