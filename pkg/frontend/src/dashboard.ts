/** Live fault-injection dashboard over one simulation session.
 *
 * Each poll advances the session by a fixed number of ticks and refreshes
 * the status register, the active-pipeline highlight and the event feed.
 * The highlight is always the service-reported active mask decoded
 * through the session's PE directory; the dashboard itself never
 * re-implements the selection rule.
 */

import type { FaultAction, GraphDocument, Service, SimState, TraceRecord } from "./types.js";

export interface DashboardOptions {
  /** wall-clock poll period (ms); the timer loop is started explicitly */
  pollMs?: number;
  /** simulated ticks advanced per poll */
  ticksPerPoll?: number;
}

export class SimDashboard {
  sessionId: string | null = null;
  state: SimState | null = null;
  feed: TraceRecord[] = [];
  lost = false;
  readonly pollMs: number;
  readonly ticksPerPoll: number;
  private cursor = 0;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(private service: Service, options: DashboardOptions = {}) {
    this.pollMs = options.pollMs ?? 250;
    this.ticksPerPoll = options.ticksPerPoll ?? 10;
  }

  async start(doc: GraphDocument, scenario?: object): Promise<void> {
    const created = await this.service.createSession(doc, scenario);
    this.sessionId = created.session_id;
    this.state = created.state;
    this.feed = [];
    this.cursor = 0;
    this.lost = false;
  }

  /** One poll: advance, fetch state and any new trace records. */
  async poll(): Promise<void> {
    if (!this.sessionId) return;
    try {
      await this.service.step(this.sessionId, this.ticksPerPoll);
      this.state = await this.service.state(this.sessionId);
      const batch = await this.service.trace(this.sessionId, this.cursor);
      this.cursor = batch.next_since;
      this.feed.push(...batch.records);
    } catch (error) {
      if ((error as { status?: number }).status === 404) {
        this.lost = true;
        this.stopPolling();
      } else {
        throw error;
      }
    }
  }

  startPolling(onUpdate?: () => void): void {
    this.stopPolling();
    this.timer = setInterval(async () => {
      await this.poll();
      onUpdate?.();
    }, this.pollMs);
  }

  stopPolling(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  async setHealth(node: string, action: FaultAction): Promise<void> {
    if (!this.sessionId) return;
    this.state =
      action === "repair"
        ? await this.service.repair(this.sessionId, node)
        : await this.service.fault(this.sessionId, node, action);
  }

  /** The active mask as reported by the service. */
  highlightMask(): number {
    return this.state?.active_mask ?? 0;
  }

  /** Keys of the PEs inside the active pipeline (directory decode). */
  activePipelineKeys(): string[] {
    const state = this.state;
    if (!state || !state.pe_directory) return [];
    const keys: string[] = [];
    for (const [idHex, key] of Object.entries(state.pe_directory)) {
      const bit = parseInt(idHex, 16);
      if (bit & state.active_mask) keys.push(key);
    }
    return keys.sort();
  }

  renderRegisterHtml(): string {
    const state = this.state;
    if (!state) return `<div class="register empty">no session</div>`;
    const width = state.options ? Math.max(...state.options, 1).toString(2).length : 8;
    const bits = state.status
      .toString(2)
      .padStart(width, "0");
    return (
      `<div class="register"><span class="bits">${bits}</span>` +
      `<span class="hex">${state.status_hex}</span>` +
      `<span class="tick">tick ${state.tick}</span></div>`
    );
  }

  renderHighlightHtml(): string {
    const state = this.state;
    if (!state) return `<div class="highlight empty"></div>`;
    if (!state.system_up) return `<div class="highlight down">SYSTEM DOWN</div>`;
    const members = this.activePipelineKeys().join(", ");
    return (
      `<div class="highlight up" data-mask="${state.active_mask_hex}">` +
      `active ${state.active_mask_hex} (option ${state.active_index! + 1}): ${members}</div>`
    );
  }

  renderTogglesHtml(): string {
    const state = this.state;
    if (!state) return `<div class="toggles empty"></div>`;
    const rows = Object.entries(state.pe_health).map(([key, health]) => {
      return (
        `<div class="pe-row health-${health}" data-node="${key}"><span class="pe">${key}</span>` +
        `<span class="health">${health.replace("_", " ")}</span>` +
        `<button data-action="fail">fail</button>` +
        `<button data-action="fail_silent">fail silent</button>` +
        `<button data-action="repair">repair</button></div>`
      );
    });
    return `<div class="toggles">${rows.join("")}</div>`;
  }

  renderFeedHtml(limit = 40): string {
    const rows = this.feed.slice(-limit).map((record) => {
      const extras = Object.entries(record)
        .filter(([k]) => k !== "kind" && k !== "tick")
        .map(([k, v]) => `${k}=${v}`)
        .join(" ");
      return `<li class="evt evt-${record.kind}"><span class="t">${record.tick}</span> ${record.kind} ${extras}</li>`;
    });
    if (this.lost) rows.push(`<li class="evt lost">session lost</li>`);
    return `<ul class="feed">${rows.join("")}</ul>`;
  }
}
