import { beforeEach, describe, expect, it } from "vitest";

import { SimDashboard } from "../src/dashboard.js";
import type { GraphDocument } from "../src/types.js";
import { MockService, fixture } from "./mock_service.js";

const triple = () => fixture<GraphDocument>("triple.json");

// the mock session ages silent PEs out after 30 ticks; each poll advances 10
const TICKS_PER_POLL = 10;
const AGING = 30;

describe("simulation dashboard", () => {
  let service: MockService;
  let dashboard: SimDashboard;

  beforeEach(async () => {
    service = new MockService();
    dashboard = new SimDashboard(service, { pollMs: 250, ticksPerPoll: TICKS_PER_POLL });
    await dashboard.start(triple());
    await dashboard.poll();
  });

  it("starts on the best option with all PEs up", () => {
    expect(dashboard.state!.status_hex).toBe("0xF");
    expect(dashboard.highlightMask()).toBe(0x9);
    expect(dashboard.renderHighlightHtml()).toContain('data-mask="0x9"');
  });

  it("decodes the active mask through the PE directory", () => {
    expect(dashboard.activePipelineKeys()).toEqual(["Door1Drv", "Voter"]);
  });

  it("fail-silent moves the highlight 0x9 -> 0xA within one poll after the aging window", async () => {
    await dashboard.setHealth("Door1Drv", "fail_silent");
    const failTick = dashboard.state!.tick;

    // during the aging window the highlight must not move
    const pollsInsideWindow = Math.floor(AGING / TICKS_PER_POLL);
    for (let i = 0; i < pollsInsideWindow; i++) {
      await dashboard.poll();
      expect(dashboard.state!.tick - failTick).toBeLessThanOrEqual(AGING);
      expect(dashboard.highlightMask()).toBe(0x9);
    }

    // one poll interval past the window the service reports 0xA
    await dashboard.poll();
    expect(dashboard.highlightMask()).toBe(0xa);
    expect(dashboard.renderHighlightHtml()).toContain('data-mask="0xA"');
    expect(dashboard.activePipelineKeys()).toEqual(["Door2Drv", "Voter"]);
  });

  it("with no toggles the highlight never changes", async () => {
    for (let i = 0; i < 20; i++) {
      await dashboard.poll();
      expect(dashboard.highlightMask()).toBe(0x9);
    }
  });

  it("graceful failure drops the PE immediately", async () => {
    await dashboard.setHealth("Door1Drv", "fail");
    expect(dashboard.highlightMask()).toBe(0xa);
    await dashboard.setHealth("Door1Drv", "repair");
    expect(dashboard.highlightMask()).toBe(0x9);
  });

  it("voter loss reports system down, repair restores", async () => {
    await dashboard.setHealth("Voter", "fail");
    expect(dashboard.state!.system_up).toBe(false);
    expect(dashboard.renderHighlightHtml()).toContain("SYSTEM DOWN");
    await dashboard.setHealth("Voter", "repair");
    expect(dashboard.state!.system_up).toBe(true);
  });

  it("event feed mirrors the session trace", async () => {
    await dashboard.setHealth("Door1Drv", "fail");
    await dashboard.poll();
    const kinds = dashboard.feed.map((r) => r.kind);
    expect(kinds).toContain("selection_changed");
    expect(dashboard.renderFeedHtml()).toContain("selection_changed");
  });

  it("status register renders binary and hex views", () => {
    const html = dashboard.renderRegisterHtml();
    expect(html).toContain("1111");
    expect(html).toContain("0xF");
  });

  it("per-PE toggles render for every tracked PE", () => {
    const html = dashboard.renderTogglesHtml();
    for (const key of ["Door1Drv", "Door2Drv", "Door3Drv", "Voter"]) {
      expect(html).toContain(`data-node="${key}"`);
    }
    expect(html.match(/data-action="fail_silent"/g)).toHaveLength(4);
  });

  it("a lost session flags the banner and stops polling", async () => {
    service.sessions.clear();
    await dashboard.poll();
    expect(dashboard.lost).toBe(true);
    expect(dashboard.renderFeedHtml()).toContain("session lost");
  });
});
