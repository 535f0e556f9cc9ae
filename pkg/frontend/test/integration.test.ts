/**
 * End-to-end acceptance: two scripted annotator sessions drive the real
 * Python annotation server through the TypeScript client, the export is
 * fed to `commentlens agree`, and the analytically expected kappa for the
 * scripted label pattern comes back.
 */

import { spawn, spawnSync, ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { AnnotationClient } from "../src/api.js";
import { SessionController } from "../src/session.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const REPO_ROOT = join(HERE, "..", "..");
const TASKS = join(HERE, "fixtures", "tasks.jsonl");

let server: ChildProcess;
let baseUrl = "";
let workDir = "";

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "annotate-"));
  server = spawn(
    "python3",
    ["-u", "-m", "commentlens.cli", "annotate", "--serve",
     "--tasks", TASKS, "--out", join(workDir, "sessions"),
     "--port", "0"],
    { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] },
  );
  baseUrl = await new Promise<string>((resolve, reject) => {
    const timeout = setTimeout(
      () => reject(new Error("server did not start")), 15000);
    let buffer = "";
    server.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/on (http:\/\/[\d.]+:\d+)\//);
      if (match) {
        clearTimeout(timeout);
        resolve(match[1]);
      }
    });
    server.stderr!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
    });
    server.on("exit", () =>
      reject(new Error("server exited early: " + buffer)));
  });
}, 20000);

afterAll(() => {
  server?.kill("SIGINT");
});

async function runScriptedSession(
  session: string,
  labelFor: (index: number) => string,
): Promise<number[]> {
  const controller = new SessionController(
    new AnnotationClient(baseUrl), session);
  const measured: number[] = [];
  let state = await controller.load();
  let index = 0;
  while (state.kind === "task") {
    const onScreenSince = Date.now();
    await sleep(15 + index * 3); // pretend to read the snippet
    controller.selectCategory(labelFor(index));
    const before = Date.now();
    state = await controller.submit();
    measured.push(before - onScreenSince);
    index += 1;
  }
  expect(state.kind).toBe("finished");
  expect(index).toBe(10);
  return measured;
}

describe("scripted annotation loop", () => {
  it("two sessions annotate all tasks; agree reproduces the expected kappa",
     async () => {
    // rater1: all Postcondition. rater2: half Postcondition, half
    // Precondition. Agreement on 5/10 items with pooled marginals
    // 15:5 gives Fleiss kappa of exactly -1/3.
    const measured1 = await runScriptedSession("rater1",
      () => "Postcondition");
    const measured2 = await runScriptedSession("rater2",
      (i) => (i < 5 ? "Postcondition" : "Precondition"));

    const client = new AnnotationClient(baseUrl);
    const progress1 = await client.progress("rater1");
    const progress2 = await client.progress("rater2");
    expect(progress1).toEqual({ done: 10, total: 10 });
    expect(progress2).toEqual({ done: 10, total: 10 });

    const exported = await client.exportSessions(["rater1", "rater2"]);
    const records = exported
      .split("\n")
      .filter((line) => line.trim())
      .map((line) => JSON.parse(line));
    expect(records).toHaveLength(20);
    for (const record of records) {
      expect(record.elapsed_ms).toBeGreaterThan(0);
    }

    // recorded times match the UI-side measurement within 50 ms
    const recorded1 = records
      .filter((r) => r.annotator === "rater1")
      .map((r) => r.elapsed_ms as number);
    expect(recorded1).toHaveLength(measured1.length);
    recorded1.forEach((ms, i) => {
      expect(Math.abs(ms - measured1[i])).toBeLessThanOrEqual(50);
    });
    expect(measured2).toHaveLength(10);

    const exportPath = join(workDir, "export.jsonl");
    writeFileSync(exportPath, exported);
    const agree = spawnSync(
      "python3",
      ["-m", "commentlens.cli", "agree", "--sessions", exportPath],
      { cwd: REPO_ROOT, encoding: "utf-8" },
    );
    expect(agree.status).toBe(0);
    expect(agree.stdout).toContain("items: 10  raters: 2");
    expect(agree.stdout).toContain("fleiss_kappa: -0.3333");
  }, 30000);

  it("refreshing mid-session resumes where it left off", async () => {
    const first = new SessionController(
      new AnnotationClient(baseUrl), "rater3");
    let state = await first.load();
    expect(state.kind).toBe("task");
    first.selectCategory("Guide");
    await first.submit();

    // a brand-new controller (page refresh) sees progress preserved
    const second = new SessionController(
      new AnnotationClient(baseUrl), "rater3");
    state = await second.load();
    expect(state.kind).toBe("task");
    const progress = await second.progress();
    expect(progress.done).toBe(1);
  }, 20000);

  it("rejects labels outside the closed category set", async () => {
    const response = await fetch(`${baseUrl}/api/annotations`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        session: "rater4",
        task_id: "demo:src/Fixture0.java:2:17",
        label: "Foo",
        elapsed_ms: 10,
      }),
    });
    expect(response.status).toBe(400);
  });
});
