/** Wires the panels to the service. One page, one session: pick a
 * model, set clamps, run, read the chart, pin runs to compare, edit
 * weights, save. All computation happens on the server.
 */
import type { DocumentObj, OutcomeObj } from "./api.js";
import { ApiClient } from "./api.js";
import { outcomeBars, renderChartSvg } from "./chart.js";
import { formatSigned } from "./format.js";
import type { MatrixGrid } from "./matrix.js";
import { applyGridToDocument, editCell, gridFromModel } from "./matrix.js";
import type { RunRecord, SessionState } from "./state.js";
import {
  clampsForRun,
  configForRun,
  disengageAll,
  loadClampSet,
  newSession,
  pinRun,
  recordRun,
  selectModel,
  setClampEngaged,
  setClampValue,
  unpinRun,
} from "./state.js";
import {
  BrowserRow,
  describeError,
  renderBadge,
  renderComparisonTable,
  renderHistory,
  renderMatrixTable,
  renderMetricsView,
  renderModelList,
  renderScenarioChips,
  renderSliderRows,
} from "./views.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

class App {
  private readonly api = new ApiClient("");
  private readonly state: SessionState = newSession();
  private document: DocumentObj | null = null;
  private grid: MatrixGrid | null = null;
  private fixtureIds = new Set<string>();
  private runCounter = 0;

  async boot(): Promise<void> {
    this.bindStatic();
    await this.refreshBrowser();
    const first = document.querySelector<HTMLElement>("[data-model-id]");
    const firstId = first?.dataset.modelId;
    if (firstId) await this.openModel(firstId);
  }

  private bindStatic(): void {
    byId("refresh-models").addEventListener("click", () => {
      void this.refreshBrowser();
    });
    byId("run-btn").addEventListener("click", () => {
      void this.runScenario();
    });
    byId("disengage-all").addEventListener("click", () => {
      disengageAll(this.state);
      this.renderSliders();
    });
    byId("matrix-save").addEventListener("click", () => {
      void this.saveMatrix();
    });
    byId("matrix-revert").addEventListener("click", () => {
      if (this.document) {
        this.grid = gridFromModel(this.document.model);
        this.renderMatrix();
      }
    });

    for (const tab of document.querySelectorAll<HTMLElement>(".tab")) {
      tab.addEventListener("click", () => {
        const name = tab.dataset.tab;
        for (const other of document.querySelectorAll<HTMLElement>(".tab")) {
          other.classList.toggle("active", other === tab);
        }
        for (const panel of document.querySelectorAll<HTMLElement>(".panel")) {
          panel.classList.toggle("active", panel.dataset.panel === name);
        }
      });
    }

    // panels redraw their contents, so events are delegated
    byId("model-list").addEventListener("click", (event) => {
      const target = (event.target as HTMLElement).closest<HTMLElement>(
        ".model-open",
      );
      const modelId = target?.dataset.modelId;
      if (modelId) void this.openModel(modelId);
    });

    const sliders = byId("sliders");
    sliders.addEventListener("input", (event) => {
      const el = event.target as HTMLInputElement;
      const conceptId = el.dataset.conceptId;
      if (!conceptId) return;
      if (el.classList.contains("clamp-slider")) {
        setClampValue(this.state, conceptId, Number(el.value));
        const row = el.closest(".slider-row");
        const label = row?.querySelector(".slider-value");
        if (label) label.textContent = formatSigned(Number(el.value));
      }
    });
    sliders.addEventListener("change", (event) => {
      const el = event.target as HTMLInputElement;
      const conceptId = el.dataset.conceptId;
      if (!conceptId) return;
      if (el.classList.contains("clamp-toggle")) {
        setClampEngaged(this.state, conceptId, el.checked);
        this.renderSliders();
      }
    });

    byId("scenario-chips").addEventListener("click", (event) => {
      const chip = (event.target as HTMLElement).closest<HTMLElement>(".chip");
      const name = chip?.dataset.scenarioName;
      if (!name || !this.document) return;
      const scenario = (this.document.scenarios ?? []).find(
        (s) => s.name === name,
      );
      if (scenario) {
        loadClampSet(this.state, scenario.clamps);
        this.renderSliders();
      }
    });

    byId("history").addEventListener("click", (event) => {
      const el = (event.target as HTMLElement).closest<HTMLElement>("button");
      const raw = el?.dataset.historyIndex;
      if (raw === undefined) return;
      const record = this.state.history[Number(raw)];
      if (!record) return;
      if (el?.classList.contains("history-pin")) {
        if (!pinRun(this.state, record)) {
          this.showError("comparison is full: unpin one of the three first");
          return;
        }
        this.renderComparison();
      } else {
        this.showOutcome(record.outcome);
      }
    });

    byId("comparison").addEventListener("click", (event) => {
      const el = (event.target as HTMLElement).closest<HTMLElement>(".unpin");
      const raw = el?.dataset.pinIndex;
      if (raw === undefined) return;
      unpinRun(this.state, Number(raw));
      this.renderComparison();
    });

    byId("matrix-wrap").addEventListener("change", (event) => {
      const el = event.target as HTMLInputElement;
      if (!el.classList.contains("cell") || !this.grid) return;
      const result = editCell(
        this.grid,
        Number(el.dataset.row),
        Number(el.dataset.col),
        el.value,
      );
      if (!result.ok) {
        this.showError(result.error);
        el.classList.add("invalid");
      } else {
        this.clearError();
        el.classList.remove("invalid");
        this.renderMatrixStatus();
      }
    });

    const cfgBind = (id: string, key: "kernel" | "squash") => {
      byId<HTMLSelectElement>(id).addEventListener("change", (event) => {
        const value = (event.target as HTMLSelectElement).value;
        if (value === "") delete this.state.config[key];
        else this.state.config[key] = value;
      });
    };
    cfgBind("cfg-kernel", "kernel");
    cfgBind("cfg-squash", "squash");
    byId<HTMLInputElement>("cfg-steepness").addEventListener("change", (e) => {
      const raw = (e.target as HTMLInputElement).value;
      if (raw === "") delete this.state.config.steepness;
      else this.state.config.steepness = Number(raw);
    });
    byId<HTMLInputElement>("cfg-maxiter").addEventListener("change", (e) => {
      const raw = (e.target as HTMLInputElement).value;
      if (raw === "") delete this.state.config.max_iterations;
      else this.state.config.max_iterations = Number(raw);
    });
  }

  private async refreshBrowser(): Promise<void> {
    try {
      const [models, fixtures] = await Promise.all([
        this.api.listModels(),
        this.api.listFixtures(),
      ]);
      this.fixtureIds = new Set(fixtures.map((f) => f.id));
      const rows: BrowserRow[] = models.map((m) => ({
        id: m.id,
        name: m.name,
        fixture: this.fixtureIds.has(m.id),
      }));
      byId("model-list").innerHTML = renderModelList(
        rows,
        this.state.selectedModelId,
      );
      this.clearError();
    } catch (exc) {
      this.showError(describeError(exc));
    }
  }

  private async openModel(modelId: string): Promise<void> {
    try {
      const entry = await this.api.getModel(modelId);
      this.document = entry.document;
      selectModel(this.state, modelId);
      this.grid = gridFromModel(entry.document.model);
      byId("model-title").textContent =
        entry.document.model.name || modelId;
      byId("scenario-chips").innerHTML = renderScenarioChips(
        entry.document.scenarios ?? [],
      );
      byId("outcome-chart").innerHTML = "";
      byId("badge").innerHTML = "";
      this.renderSliders();
      this.renderMatrix();
      await this.refreshMetrics();
      await this.refreshBrowser();
    } catch (exc) {
      this.showError(describeError(exc));
    }
  }

  private renderSliders(): void {
    if (!this.document) return;
    byId("sliders").innerHTML = renderSliderRows(
      this.document.model.concepts,
      this.state.clamps,
    );
  }

  private renderMatrix(): void {
    if (!this.grid) return;
    byId("matrix-wrap").innerHTML = renderMatrixTable(this.grid);
    this.renderMatrixStatus();
  }

  private renderMatrixStatus(): void {
    byId("matrix-status").textContent = this.grid?.dirty
      ? "unsaved weight edits"
      : "";
  }

  private renderComparison(): void {
    byId("comparison").innerHTML = renderComparisonTable(this.state.pinned);
  }

  private async refreshMetrics(): Promise<void> {
    if (!this.state.selectedModelId) return;
    const metrics = await this.api.getMetrics(this.state.selectedModelId);
    byId("metrics").innerHTML = renderMetricsView(metrics);
  }

  private showOutcome(outcome: OutcomeObj): void {
    if (!this.document) return;
    byId("badge").innerHTML = renderBadge(outcome.clamped);
    const groups = outcomeBars(this.document.model, outcome.relative_change);
    byId("outcome-chart").innerHTML = renderChartSvg(groups);
  }

  private async runScenario(): Promise<void> {
    const modelId = this.state.selectedModelId;
    if (!modelId || this.state.runPending) return;
    const button = byId<HTMLButtonElement>("run-btn");
    this.state.runPending = true;
    button.disabled = true;
    try {
      const body = {
        clamps: clampsForRun(this.state),
        config: configForRun(this.state),
      };
      const outcome = await this.api.run(modelId, body);
      this.runCounter += 1;
      const record: RunRecord = {
        at: Date.now(),
        label: `run ${this.runCounter}`,
        modelId,
        outcome,
      };
      recordRun(this.state, record);
      byId("history").innerHTML = renderHistory(this.state.history);
      this.showOutcome(outcome);
      this.clearError();
    } catch (exc) {
      this.showError(describeError(exc));
    } finally {
      this.state.runPending = false;
      button.disabled = false;
    }
  }

  private async saveMatrix(): Promise<void> {
    if (!this.document || !this.grid || !this.state.selectedModelId) return;
    try {
      const updated = applyGridToDocument(this.document, this.grid);
      await this.api.putModel(this.state.selectedModelId, updated);
      this.document = updated;
      this.grid.dirty = false;
      this.renderMatrixStatus();
      this.clearError();
      await this.refreshMetrics();
      await this.refreshBrowser();
    } catch (exc) {
      this.showError(describeError(exc));
    }
  }

  private showError(message: string): void {
    const banner = byId("error-banner");
    banner.textContent = message;
    banner.classList.add("visible");
  }

  private clearError(): void {
    const banner = byId("error-banner");
    banner.textContent = "";
    banner.classList.remove("visible");
  }
}

void new App().boot();
