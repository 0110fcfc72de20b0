/** Console session state: settings, append-only history, pinned evidence. */

import type { StepRecord, Transcript } from "./types.js";

export interface Settings {
  serverUrl: string;
  backend: "scripted" | "remote";
}

export interface PinnedEvidence {
  question: string;
  step: StepRecord;
  note: string;
}

const SETTINGS_KEY = "kycgraph-console-settings";

export class ConsoleSession {
  readonly history: Transcript[] = [];
  readonly pinned: PinnedEvidence[] = [];
  settings: Settings;

  constructor(private readonly storage?: Storage) {
    this.settings = this.loadSettings();
  }

  private loadSettings(): Settings {
    const fallback: Settings = {
      serverUrl: "http://127.0.0.1:7688",
      backend: "scripted",
    };
    if (!this.storage) {
      return fallback;
    }
    try {
      const raw = this.storage.getItem(SETTINGS_KEY);
      return raw ? { ...fallback, ...JSON.parse(raw) } : fallback;
    } catch {
      return fallback;
    }
  }

  saveSettings(settings: Partial<Settings>): void {
    this.settings = { ...this.settings, ...settings };
    this.storage?.setItem(SETTINGS_KEY, JSON.stringify(this.settings));
  }

  /** History is append-only within a session. */
  record(transcript: Transcript): void {
    this.history.push(transcript);
  }

  pin(question: string, step: StepRecord, note = ""): void {
    this.pinned.push({ question, step, note });
  }
}
