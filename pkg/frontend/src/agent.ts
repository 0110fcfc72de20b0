/** Console-side scripted investigation loop.
 *
 * The console hosts the loop itself and only ever issues cataloged tool
 * methods; steps surface through the onStep callback as they complete, so
 * the transcript view updates live.
 */

import { RpcClient } from "./rpc.js";
import { matchTemplate } from "./templates.js";
import type { StepRecord, Transcript } from "./types.js";

export interface InvestigationCallbacks {
  onStep?: (step: StepRecord) => void;
  onAnswer?: (transcript: Transcript) => void;
}

export class UnsupportedQuestionError extends Error {}

export async function runInvestigation(
    question: string, client: RpcClient,
    callbacks: InvestigationCallbacks = {}): Promise<Transcript> {
  const matched = matchTemplate(question);
  if (!matched) {
    throw new UnsupportedQuestionError(
      `the scripted backend has no template for: ${question}`);
  }
  const { template, slots } = matched;
  const transcript: Transcript = {
    question, steps: [], answer: null, failed: false,
  };
  for (const planned of template.plan(slots)) {
    const started = performance.now();
    const { response, rawText } = await client.callRaw(planned.tool,
                                                       planned.params);
    const step: StepRecord = {
      index: transcript.steps.length,
      tool: planned.tool,
      params: planned.params,
      response,
      rawText,
      elapsedMs: performance.now() - started,
    };
    transcript.steps.push(step);
    callbacks.onStep?.(step);
    if (response.error) {
      transcript.failed = true;
      transcript.answer = {
        direct: response.error.code === 1001
          ? `The requested entity was not found: ${response.error.message}`
          : `The investigation could not be completed: ` +
            `${response.error.message}`,
        details: [],
        findings: [`tool error code = ${response.error.code}`],
      };
      callbacks.onAnswer?.(transcript);
      return transcript;
    }
  }
  transcript.answer = template.answer(slots, transcript.steps);
  callbacks.onAnswer?.(transcript);
  return transcript;
}

/** Every rendered claim must be evidenced by its linked step's raw bytes. */
export function verifyTraceability(transcript: Transcript): string[] {
  const problems: string[] = [];
  if (!transcript.answer) {
    return ["transcript has no answer"];
  }
  for (const detail of transcript.answer.details) {
    if (detail.stepIndex === null ||
        detail.stepIndex >= transcript.steps.length) {
      problems.push(`claim '${detail.label}' has no step link`);
      continue;
    }
    const raw = transcript.steps[detail.stepIndex].rawText;
    if (!raw.toLowerCase().includes(detail.value.toLowerCase()) &&
        !numberAppearsIn(raw, detail.value)) {
      problems.push(
        `claim '${detail.label} = ${detail.value}' not present in step ` +
        `${detail.stepIndex}`);
    }
  }
  return problems;
}

function numberAppearsIn(raw: string, value: string): boolean {
  const numeric = Number(value);
  if (Number.isNaN(numeric)) {
    return false;
  }
  for (const match of raw.matchAll(/-?\d+(?:\.\d+)?/g)) {
    if (Number(match[0]) === numeric) {
      return true;
    }
  }
  return false;
}
