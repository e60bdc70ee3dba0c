import init, { table_grid, period_profile, doubling_ranks, enumerate } from "./pkg/laver_wasm.js";

const $ = (id) => document.getElementById(id);

function show(el, f) {
  try {
    el.classList.remove("error");
    f();
  } catch (e) {
    el.classList.add("error");
    el.textContent = String(e);
  }
}

function drawGrid() {
  const n = Number($("grid-n").value);
  const canvas = $("grid");
  show($("hover"), () => {
    const values = table_grid(n);
    const size = 1 << n;
    const cell = Math.max(1, Math.floor(512 / size));
    canvas.width = canvas.height = cell * size;
    const ctx = canvas.getContext("2d");
    for (let a = 0; a < size; a++) {
      for (let b = 0; b < size; b++) {
        const v = values[a * size + b];
        // 0 stands for 2^n, so it gets the brightest colour
        const t = (v === 0 ? size : v) / size;
        ctx.fillStyle = `hsl(${220 - 200 * t}, 70%, ${25 + 50 * t}%)`;
        ctx.fillRect(b * cell, a * cell, cell, cell);
      }
    }
    canvas.onmousemove = (ev) => {
      const r = canvas.getBoundingClientRect();
      const b = Math.floor((ev.clientX - r.left) / cell);
      const a = Math.floor((ev.clientY - r.top) / cell);
      if (a < size && b < size) {
        $("hover").textContent = `${a} * ${b + 1} = ${values[a * size + b]}  in A_${n}`;
      }
    };
    $("hover").textContent = "hover over a cell";
  });
}

function drawProfile() {
  const a = Number($("prof-a").value);
  const n = Number($("prof-n").value);
  show($("doubling"), () => {
    const periods = period_profile(a, n);
    const ups = doubling_ranks(a, n);
    const bars = $("bars");
    bars.replaceChildren();
    const top = Math.log2(Math.max(...periods)) || 1;
    periods.forEach((p, m) => {
      const d = document.createElement("div");
      d.style.height = `${8 + 140 * Math.log2(p) / top}px`;
      d.title = `p_${m}(${a}) = ${p}`;
      if (ups.includes(m - 1)) d.className = "up";
      const s = document.createElement("span");
      s.textContent = m;
      d.appendChild(s);
      bars.appendChild(d);
    });
    $("doubling").textContent = ups.length
      ? `period of ${a} doubles from A_m to A_(m+1) at m = ${ups.join(", ")}`
      : `period of ${a} never doubles below A_${n}`;
  });
}

function listOrdinals() {
  const n = Number($("ord-n").value);
  show($("ordinals"), () => {
    $("ordinals").textContent = enumerate(n);
  });
}

await init();
$("grid-n").addEventListener("input", drawGrid);
$("prof-a").addEventListener("input", drawProfile);
$("prof-n").addEventListener("input", drawProfile);
$("ord-n").addEventListener("input", listOrdinals);
drawGrid();
drawProfile();
listOrdinals();
