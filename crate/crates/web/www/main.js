import init, { generate, validate, trace } from "./pkg/metafib_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number.parseInt($(id).value, 10);

function specJson() {
  const family = $("family").value;
  switch (family) {
    case "conway":
      return { family: "conway", k: num("k"), a: num("a"), b: num("b") };
    case "variant":
      return { family: "conway_variant", k: num("k"), a: num("a"), b: num("b"), c: num("c") };
    case "conolly":
      return { family: "conolly", s: num("s") };
    default:
      return {
        family: "general_conolly",
        terms: $("terms").value.split(",").map((p) => {
          const [a, b] = p.split(":").map((v) => Number.parseInt(v, 10));
          return { a, b };
        }),
      };
  }
}

function showFamilyInputs() {
  const family = $("family").value;
  for (const el of document.querySelectorAll("[data-for]")) {
    el.classList.toggle("hidden", !el.dataset.for.split(" ").includes(family));
  }
}

function show(text, isError = false) {
  $("output").textContent = text;
  $("output").classList.toggle("error", isError);
}

// term(n)/n, one vertical min-max bar per pixel column.
function plotRatios(terms) {
  const canvas = $("plot");
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const y = (r) => height - r * height;

  ctx.strokeStyle = "#ddd";
  for (const r of [0.25, 0.5, 0.75]) {
    ctx.beginPath();
    ctx.moveTo(0, y(r));
    ctx.lineTo(width, y(r));
    ctx.stroke();
  }
  ctx.fillStyle = "#888";
  ctx.fillText("1/2", 4, y(0.5) - 4);

  const n = terms.length;
  if (n === 0) return;
  ctx.strokeStyle = "#1f5fbf";
  for (let x = 0; x < width; x++) {
    const lo = Math.floor((x * n) / width);
    const hi = Math.max(lo + 1, Math.floor(((x + 1) * n) / width));
    let min = Infinity;
    let max = -Infinity;
    for (let i = lo; i < hi && i < n; i++) {
      const r = terms[i] / (i + 1);
      min = Math.min(min, r);
      max = Math.max(max, r);
    }
    if (min === Infinity) continue;
    ctx.beginPath();
    ctx.moveTo(x + 0.5, y(Math.min(max, 1)));
    ctx.lineTo(x + 0.5, y(Math.min(min, 1)) + 1);
    ctx.stroke();
  }
}

function onGenerate() {
  const reply = JSON.parse(generate(JSON.stringify(specJson()), $("ics").value, num("count")));
  if (reply.error) return show(reply.error, true);
  plotRatios(reply.terms);
  const n = reply.terms.length;
  const last = reply.terms[n - 1];
  $("summary").textContent =
    `${reply.spec}: ${n} terms, term(${n}) = ${last}, ratio ${(last / n).toFixed(6)}`;
  const head = reply.terms.slice(0, 40).join(", ");
  show(reply.halt ? `${head}\n\nhalted: ${reply.halt.message}` : head, Boolean(reply.halt));
}

function onValidate() {
  const reply = JSON.parse(validate(JSON.stringify(specJson()), $("ics").value));
  if (reply.error) return show(reply.error, true);
  const line = (h) =>
    `${h.satisfied ? "pass" : "FAIL"}  ${h.name.padEnd(11)} ${h.description}` +
    (h.witness ? `  (n=${h.witness.index}: ${h.witness.values.join(", ")})` : "");
  const parts = reply.hypotheses.map(line);
  if (reply.advisories.length) parts.push("advisory:", ...reply.advisories.map(line));
  parts.push(`overall: ${reply.overall ? "pass" : "FAIL"}`);
  if (reply.guarantees) parts.push(`guarantees: ${reply.guarantees}`);
  parts.push(...reply.notes.map((n) => `note: ${n}`));
  show(parts.join("\n"));
}

function onTrace() {
  const reply = JSON.parse(trace(JSON.stringify(specJson()), $("ics").value, num("at")));
  if (reply.error) return show(reply.error, true);
  show(reply.text);
}

await init();
$("family").addEventListener("change", showFamilyInputs);
$("generate").addEventListener("click", onGenerate);
$("validate").addEventListener("click", onValidate);
$("trace").addEventListener("click", onTrace);
showFamilyInputs();
onGenerate();
