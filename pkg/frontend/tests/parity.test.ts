/** Round-trip against a live service instance. Every value the UI
 * would display must match the service response at display precision,
 * with the service as the only computational authority.
 */
import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";
import { outcomeBars, renderChartSvg } from "../src/chart.js";
import { formatSigned } from "../src/format.js";
import { clampSliderValue } from "../src/state.js";
import { renderComparisonTable, renderMetricsView } from "../src/views.js";

const FIXTURES = ["paper-scenario-1", "paper-scenario-2", "paper-scenario-3"];

const port = 8800 + (process.pid % 1000);
const base = `http://127.0.0.1:${port}`;
const api = new ApiClient(base);

let server: ChildProcess;
let storageDir: string;

async function waitForService(): Promise<void> {
  const deadline = Date.now() + 20_000;
  for (;;) {
    try {
      await api.listModels();
      return;
    } catch {
      if (Date.now() > deadline) {
        throw new Error(`service did not come up on ${base}`);
      }
      await new Promise((resolve) => setTimeout(resolve, 250));
    }
  }
}

beforeAll(async () => {
  storageDir = mkdtempSync(join(tmpdir(), "fcmsim-ui-"));
  server = spawn(
    "fcmsim-serve",
    ["--port", String(port), "--storage-dir", storageDir],
    { stdio: "ignore" },
  );
  await waitForService();
});

afterAll(() => {
  server?.kill();
  if (storageDir) rmSync(storageDir, { recursive: true, force: true });
});

describe("outcome chart parity", () => {
  it("every displayed bar value equals the service relative_change at 2 decimals", async () => {
    const fixtureId = "paper-scenario-3";
    const entry = await api.getModel(fixtureId);
    const model = entry.document.model;
    const scenarioName = entry.document.scenarios?.[0]?.name;
    expect(scenarioName).toBeTruthy();

    const outcome = await api.run(fixtureId, { scenario: scenarioName! });
    expect(outcome.clamped.status).toBe("converged");

    const bars = outcomeBars(model, outcome.relative_change).flatMap(
      (g) => g.bars,
    );
    expect(bars.length).toBe(model.concepts.length);
    expect(bars.length).toBe(23);

    for (const bar of bars) {
      const serviceValue = outcome.relative_change[bar.concept];
      expect(serviceValue).toBeDefined();
      expect(bar.label).toBe(formatSigned(serviceValue!, 2));
      expect(Number(bar.label)).toBeCloseTo(serviceValue!, 2);
    }

    // the rendered SVG carries the same printed values
    const svg = renderChartSvg(outcomeBars(model, outcome.relative_change));
    for (const bar of bars) {
      expect(svg).toContain(
        `data-concept="${bar.concept}" data-value="${bar.label}"`,
      );
    }
  });

  it("chart rows follow the model concept order on every fixture", async () => {
    for (const fixtureId of FIXTURES) {
      const entry = await api.getModel(fixtureId);
      const model = entry.document.model;
      const outcome = await api.run(fixtureId, {
        scenario: entry.document.scenarios?.[0]?.name,
      });
      const bars = outcomeBars(model, outcome.relative_change);
      const grouped = new Map(
        bars.flatMap((g) => g.bars).map((b, i) => [b.concept, i]),
      );
      // within each group the original concept order is preserved
      for (const group of bars) {
        const indices = group.bars.map((b) =>
          model.concepts.findIndex((c) => c.id === b.concept),
        );
        expect([...indices].sort((a, b) => a - b)).toEqual(indices);
      }
      expect(grouped.size).toBe(model.concepts.length);
    }
  });
});

describe("slider bounds", () => {
  it("the client clamps values into [-1, 1]", () => {
    expect(clampSliderValue(1.7)).toBe(1);
    expect(clampSliderValue(-40)).toBe(-1);
  });

  it("the service refuses a clamp outside the range", async () => {
    const err = (await api
      .run("paper-scenario-1", { clamps: { P2: 2.0 } })
      .catch((e: unknown) => e)) as ApiError;
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(422);
  });
});

describe("metrics view parity", () => {
  it("top-ranked concept is R2 on all three bundled models", async () => {
    for (const fixtureId of FIXTURES) {
      const metrics = await api.getMetrics(fixtureId);
      expect(metrics.ranking[0]?.[0]).toBe("R2");

      const html = renderMetricsView(metrics);
      const firstRow = html.match(/<tbody><tr>(.*?)<\/tr>/);
      expect(firstRow?.[1]).toContain("<td>R2</td>");
    }
  });

  it("scalar parameters render straight from the response", async () => {
    const metrics = await api.getMetrics("paper-scenario-1");
    const html = renderMetricsView(metrics);
    expect(html).toContain(metrics.density.toFixed(6));
    expect(html).toContain(String(metrics.concept_count));
  });
});

describe("comparison view parity", () => {
  it("cells carry the service values with sign highlighting", async () => {
    const records = [];
    for (const fixtureId of FIXTURES.slice(0, 2)) {
      const entry = await api.getModel(fixtureId);
      const outcome = await api.run(fixtureId, {
        scenario: entry.document.scenarios?.[0]?.name,
      });
      records.push({
        at: Date.now(),
        label: entry.document.model.name,
        modelId: fixtureId,
        outcome,
      });
    }
    const html = renderComparisonTable(records);
    for (const record of records) {
      for (const [conceptId, value] of Object.entries(
        record.outcome.relative_change,
      )) {
        expect(html).toContain(`<th>${conceptId}</th>`);
        expect(html).toContain(formatSigned(value, 2));
      }
    }
    expect(html).toContain('class="neg"');
    expect(html).toContain('class="pos"');
  });
});
