/** Triage workspace: candidate table, first-pass chart gallery, and decision
 * recording against the run server's decisions endpoint.
 *
 * All candidate data is read straight from /manifest.json and the archived
 * SVGs; the only write path is PUT /api/decisions. Decision state shown in
 * the UI always mirrors the last successful server round-trip (optimistic
 * updates are reconciled or reverted).
 */

import {
  ApiError,
  ConflictError,
  DecisionsClient,
  fetchManifest,
  IncompatibleManifestError,
} from "./api.js";
import { fmtMetric, fmtParams, fmtSizes, gateLabel, gateTooltip } from "./format.js";
import {
  applyDecision,
  decisionOf,
  defaultFilters,
  isGated,
  selectedId,
  toggleRuledOut,
  visibleCandidates,
  type Filters,
  type SortKey,
} from "./state.js";
import type { DecisionsDoc, DecisionStatus, Manifest, ManifestCandidate } from "./types.js";
import { emptyDecisions } from "./types.js";

const client = new DecisionsClient();

const app = {
  manifest: null as Manifest | null,
  decisions: emptyDecisions() as DecisionsDoc,
  filters: defaultFilters() as Filters,
  sortKey: "manifest" as SortKey,
  view: "table" as "table" | "gallery",
  detailId: null as string | null,
  galleryFocus: 0,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

let toastTimer: number | undefined;
function toast(message: string): void {
  const node = el("toast");
  node.textContent = message;
  node.classList.remove("hidden");
  window.clearTimeout(toastTimer);
  toastTimer = window.setTimeout(() => node.classList.add("hidden"), 4000);
}

function showBanner(message: string, retryable: boolean): void {
  el("banner-text").textContent = message;
  el("banner-retry").classList.toggle("hidden", !retryable);
  el("banner").classList.remove("hidden");
}

function hideBanner(): void {
  el("banner").classList.add("hidden");
}

async function load(): Promise<void> {
  hideBanner();
  try {
    const [manifest, decisions] = await Promise.all([
      fetchManifest(),
      client.load(),
    ]);
    app.manifest = manifest;
    app.decisions = decisions;
  } catch (error) {
    if (error instanceof IncompatibleManifestError) {
      showBanner(
        `This run's manifest (${String(error.version)}) is not compatible with ` +
          `this UI (expects schema_version 1).`,
        false
      );
      return;
    }
    showBanner(error instanceof ApiError ? error.message : String(error), true);
    return;
  }
  el("controls").classList.remove("hidden");
  populateAlgorithmFilter();
  renderAll();
}

function populateAlgorithmFilter(): void {
  const select = el<HTMLSelectElement>("filter-algorithm");
  const tags = [...new Set(app.manifest!.candidates.map((c) => c.algorithm))];
  select.innerHTML =
    '<option value="all">all</option>' +
    tags.map((t) => `<option value="${t}">${t}</option>`).join("");
}

function candidateById(id: string): ManifestCandidate | null {
  return app.manifest?.candidates.find((c) => c.candidate_id === id) ?? null;
}

function decisionBadge(id: string): string {
  const status = decisionOf(app.decisions, id);
  if (!status) return '<span class="muted">–</span>';
  return `<span class="badge decision-${status}">${status.replace("_", " ")}</span>`;
}

function renderHeader(): void {
  const m = app.manifest!;
  const gated = m.candidates.filter(isGated).length;
  el("run-info").textContent =
    `run ${m.run_id} · ${m.dataset.rows}×${m.dataset.columns.length} dataset · ` +
    `${m.candidates.length} candidates, ${gated} gated out`;
}

function renderTable(): void {
  const m = app.manifest!;
  const shown = visibleCandidates(m, app.filters, app.sortKey, app.decisions);
  const body = el("candidate-rows");
  body.innerHTML = shown
    .map((c) => {
      const classes = [
        isGated(c) ? "gated" : "",
        c.status === "error" ? "failed" : "",
        c.candidate_id === app.detailId ? "active-row" : "",
      ]
        .filter(Boolean)
        .join(" ");
      const metrics = c.metrics;
      return `<tr data-id="${c.candidate_id}" class="${classes}">
        <td>${c.candidate_id}</td>
        <td>${c.algorithm}</td>
        <td>${escapeHtml(fmtParams(c.params))}</td>
        <td><span class="badge ${gateLabel(c)}" title="${escapeHtml(gateTooltip(c))}">${gateLabel(c).replace("_", " ")}</span></td>
        <td class="num">${fmtMetric(metrics?.silhouette ?? null)}</td>
        <td class="num">${fmtMetric(metrics?.calinski_harabasz ?? null)}</td>
        <td class="num">${fmtMetric(metrics?.davies_bouldin ?? null)}</td>
        <td>${fmtSizes(c.sizes)}</td>
        <td class="num">${c.n_significant_features ?? "–"}</td>
        <td>${decisionBadge(c.candidate_id)}</td>
      </tr>`;
    })
    .join("");
  el("empty-state").classList.toggle("hidden", m.candidates.length > 0);
  el("shown-count").textContent =
    `${shown.length} of ${m.candidates.length} shown`;
  for (const row of body.querySelectorAll("tr")) {
    row.addEventListener("click", () => openDetail(row.dataset.id!));
  }
}

function galleryCandidates(): ManifestCandidate[] {
  // The quick first pass covers candidates that survived the gate.
  return app.manifest!.candidates.filter(
    (c) => c.status === "ok" && c.gate?.status === "pass"
  );
}

function renderGallery(): void {
  const candidates = galleryCandidates();
  if (app.galleryFocus >= candidates.length) app.galleryFocus = 0;
  const grid = el("gallery-grid");
  grid.innerHTML = candidates
    .map((c, i) => {
      const marked = decisionOf(app.decisions, c.candidate_id) === "ruled_out";
      const classes = [
        "tile",
        marked ? "marked" : "",
        i === app.galleryFocus ? "focused" : "",
      ]
        .filter(Boolean)
        .join(" ");
      const chart = c.files
        ? `<img src="/${c.files.chart}" alt="z-scores for ${c.candidate_id}"
             onerror="this.outerHTML='<div class=placeholder>${c.candidate_id}</div>'" />`
        : `<div class="placeholder">${c.candidate_id}</div>`;
      return `<div class="${classes}" data-id="${c.candidate_id}" data-index="${i}">
        ${chart}
        <div class="tile-label">
          <strong>${c.candidate_id}</strong>
          <span>${marked ? "ruled out" : ""}</span>
        </div>
      </div>`;
    })
    .join("");
  for (const tile of grid.querySelectorAll<HTMLElement>(".tile")) {
    tile.addEventListener("click", () => {
      app.galleryFocus = Number(tile.dataset.index);
      void toggleProvisional(tile.dataset.id!);
    });
  }
}

function renderDetail(): void {
  const aside = el("detail");
  const candidate = app.detailId ? candidateById(app.detailId) : null;
  if (!candidate) {
    aside.classList.add("hidden");
    return;
  }
  aside.classList.remove("hidden");
  el("detail-title").textContent = candidate.candidate_id;
  el("detail-meta").textContent =
    `${candidate.algorithm} · ${fmtParams(candidate.params)}`;
  el("detail-gate").innerHTML =
    `<span class="badge ${gateLabel(candidate)}">${gateLabel(candidate)}</span> ` +
    `<span class="muted">${escapeHtml(gateTooltip(candidate))}</span>`;

  const chart = el<HTMLImageElement>("detail-chart");
  const profile = el<HTMLAnchorElement>("detail-profile");
  if (candidate.files) {
    chart.src = `/${candidate.files.chart}`;
    chart.classList.remove("hidden");
    profile.href = `/${candidate.files.profile}`;
    profile.classList.remove("hidden");
  } else {
    chart.classList.add("hidden");
    profile.classList.add("hidden");
  }

  const metrics = candidate.metrics;
  el("detail-metrics").innerHTML = [
    ["silhouette", fmtMetric(metrics?.silhouette ?? null)],
    ["calinski-harabasz", fmtMetric(metrics?.calinski_harabasz ?? null)],
    ["davies-bouldin", fmtMetric(metrics?.davies_bouldin ?? null)],
    ["cluster sizes", fmtSizes(candidate.sizes)],
    ["significant features", String(candidate.n_significant_features ?? "–")],
    ["error", candidate.error ? escapeHtml(candidate.error) : "–"],
  ]
    .map(([k, v]) => `<dt>${k}</dt><dd>${v}</dd>`)
    .join("");

  const note = el<HTMLTextAreaElement>("detail-note");
  note.value = app.decisions.decisions[candidate.candidate_id]?.note ?? "";

  const current = decisionOf(app.decisions, candidate.candidate_id);
  for (const status of ["ruled_out", "shortlisted", "selected"] as const) {
    el(`decide-${status}`).classList.toggle("current", current === status);
  }
}

function renderAll(): void {
  if (!app.manifest) return;
  renderHeader();
  el("table-view").classList.toggle("hidden", app.view !== "table");
  el("gallery-view").classList.toggle("hidden", app.view !== "gallery");
  el("view-table").classList.toggle("active", app.view === "table");
  el("view-gallery").classList.toggle("active", app.view === "gallery");
  if (app.view === "table") renderTable();
  else renderGallery();
  renderDetail();
}

function openDetail(id: string): void {
  app.detailId = id;
  renderAll();
}

/** Optimistically apply a decisions document, then reconcile with the server. */
async function persist(next: DecisionsDoc): Promise<void> {
  const before = app.decisions;
  app.decisions = next;
  renderAll();
  try {
    app.decisions = await client.save(next);
  } catch (error) {
    if (error instanceof ConflictError) {
      window.alert(
        `The server rejected this update: ${error.message}\n` +
          `Reloading the stored decisions.`
      );
      try {
        app.decisions = await client.load();
      } catch {
        app.decisions = before;
      }
    } else {
      app.decisions = before;
      toast(error instanceof ApiError ? error.message : String(error));
    }
  }
  renderAll();
}

async function recordDecision(id: string, status: DecisionStatus | null): Promise<void> {
  const note = el<HTMLTextAreaElement>("detail-note").value;
  if (status === "selected") {
    const current = selectedId(app.decisions);
    if (current !== null && current !== id) {
      const transfer = window.confirm(
        `${current} is currently selected. Transfer the selection to ${id}? ` +
          `(${current} becomes shortlisted.)`
      );
      if (!transfer) return;
    }
  }
  const edit = applyDecision(app.decisions, id, status, note, new Date().toISOString());
  await persist(edit.doc);
}

async function toggleProvisional(id: string): Promise<void> {
  await persist(toggleRuledOut(app.decisions, id, new Date().toISOString()));
}

function bindControls(): void {
  el("banner-retry").addEventListener("click", () => void load());
  el("view-table").addEventListener("click", () => {
    app.view = "table";
    renderAll();
  });
  el("view-gallery").addEventListener("click", () => {
    app.view = "gallery";
    renderAll();
    el("gallery-view").focus();
  });

  const gate = el<HTMLSelectElement>("filter-gate");
  gate.addEventListener("change", () => {
    app.filters = { ...app.filters, gate: gate.value as Filters["gate"] };
    renderAll();
  });
  const algorithm = el<HTMLSelectElement>("filter-algorithm");
  algorithm.addEventListener("change", () => {
    app.filters = { ...app.filters, algorithm: algorithm.value };
    renderAll();
  });
  const decision = el<HTMLSelectElement>("filter-decision");
  decision.addEventListener("change", () => {
    app.filters = { ...app.filters, decision: decision.value as Filters["decision"] };
    renderAll();
  });
  const silhouette = el<HTMLInputElement>("filter-silhouette");
  silhouette.addEventListener("change", () => {
    const value = silhouette.value.trim();
    app.filters = {
      ...app.filters,
      minSilhouette: value === "" ? null : Number(value),
    };
    renderAll();
  });
  const sort = el<HTMLSelectElement>("sort-key");
  sort.addEventListener("change", () => {
    app.sortKey = sort.value as SortKey;
    renderAll();
  });
  el("clear-filters").addEventListener("click", () => {
    app.filters = defaultFilters();
    app.sortKey = "manifest";
    gate.value = "all";
    algorithm.value = "all";
    decision.value = "all";
    silhouette.value = "";
    sort.value = "manifest";
    renderAll();
  });

  el("detail-close").addEventListener("click", () => {
    app.detailId = null;
    renderAll();
  });
  for (const status of ["ruled_out", "shortlisted", "selected"] as const) {
    el(`decide-${status}`).addEventListener("click", () => {
      if (app.detailId) void recordDecision(app.detailId, status);
    });
  }
  el("decide-clear").addEventListener("click", () => {
    if (app.detailId) void recordDecision(app.detailId, null);
  });

  el("gallery-view").addEventListener("keydown", (event) => {
    const candidates = galleryCandidates();
    if (!candidates.length) return;
    if (event.key === "ArrowRight" || event.key === "ArrowDown") {
      app.galleryFocus = (app.galleryFocus + 1) % candidates.length;
    } else if (event.key === "ArrowLeft" || event.key === "ArrowUp") {
      app.galleryFocus =
        (app.galleryFocus - 1 + candidates.length) % candidates.length;
    } else if (event.key === "Enter" || event.key === " ") {
      const focused = candidates[app.galleryFocus];
      if (focused) void toggleProvisional(focused.candidate_id);
      event.preventDefault();
      return;
    } else {
      return;
    }
    event.preventDefault();
    renderGallery();
  });
}

bindControls();
void load();
