// Shared plumbing: spawn the real service, build sample documents, wait on
// DOM conditions.

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { App } from "../src/app.js";

export interface LiveServer {
  baseUrl: string;
  process: ChildProcess;
  stop: () => Promise<void>;
}

export async function startServer(extraArgs: string[] = []): Promise<LiveServer> {
  const port = 20000 + Math.floor(Math.random() * 20000);
  const dataDir = mkdtempSync(join(tmpdir(), "kms-ui-"));
  const child = spawn(
    "python3",
    [
      "-m",
      "cacao_kms.cli",
      "serve",
      "--bind",
      `127.0.0.1:${port}`,
      "--data-dir",
      dataDir,
      "--poll-interval-ms",
      "150",
      ...extraArgs,
    ],
    { stdio: "ignore" },
  );
  const baseUrl = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    if (child.exitCode !== null) throw new Error("service exited during startup");
    try {
      const response = await fetch(`${baseUrl}/healthz`);
      if (response.ok) {
        return {
          baseUrl,
          process: child,
          stop: () =>
            new Promise<void>((resolve) => {
              child.once("exit", () => resolve());
              child.kill("SIGTERM");
              setTimeout(() => {
                if (child.exitCode === null) child.kill("SIGKILL");
              }, 5000).unref();
            }),
        };
      }
    } catch {
      await sleep(100);
    }
  }
  child.kill("SIGKILL");
  throw new Error("service did not become healthy in 30s");
}

export function newApp(baseUrl: string, pollIntervalMs = 150): App {
  document.body.innerHTML = "";
  const container = document.createElement("div");
  container.id = "app";
  document.body.append(container);
  const app = new App(container, { apiBase: baseUrl, pollIntervalMs });
  app.mount();
  return app;
}

export function uuid4(): string {
  return "xxxxxxxx-xxxx-4xxx-yxxx-xxxxxxxxxxxx".replace(/[xy]/g, (c) => {
    const r = (Math.random() * 16) | 0;
    return (c === "x" ? r : (r & 0x3) | 0x8).toString(16);
  });
}

export function samplePlaybook(name: string, delayMs = 0): Record<string, any> {
  const startId = `start--${uuid4()}`;
  const actionId = `action--${uuid4()}`;
  const endId = `end--${uuid4()}`;
  const now = new Date().toISOString().replace(/(\.\d{3})\d*Z$/, "$1Z");
  return {
    type: "playbook",
    spec_version: "cacao-2.0",
    id: `playbook--${uuid4()}`,
    name,
    created: now,
    modified: now,
    created_by: `identity--${uuid4()}`,
    labels: ["ui-test"],
    workflow_start: startId,
    workflow: {
      [startId]: { type: "start", on_completion: actionId },
      [actionId]: {
        type: "action",
        commands: [{ type: "manual", command: "do the thing" }],
        delay_ms: delayMs,
        on_completion: endId,
      },
      [endId]: { type: "end" },
    },
  };
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export async function waitFor(
  predicate: () => boolean,
  timeoutMs = 20_000,
  stepMs = 50,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (predicate()) return;
    await sleep(stepMs);
  }
  throw new Error("condition not met in time");
}

export function text(selector: string): string {
  return document.querySelector(selector)?.textContent ?? "";
}
