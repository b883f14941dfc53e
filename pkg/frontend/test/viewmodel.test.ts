import { describe, expect, it } from "vitest";

import { ApiClient, ServiceError } from "../src/api";
import { ReviewViewModel } from "../src/viewmodel";
import { makeSeededMock } from "./mockService";

describe("candidate grouping and ordering", () => {
  it("groups rows by seed, selection order first then similarity", async () => {
    const mock = makeSeededMock();
    const vm = new ReviewViewModel(new ApiClient(mock.fetch), mock.projectId);
    await vm.load();

    const groups = vm.groupsBySeed();
    expect(groups.map((g) => g.seedText)).toEqual(["list the invoices", "delete the user"]);

    const invoiceRows = groups[0]!.rows.map((r) => r.text);
    // ranks 0 and 1 first, then the rank-less pending row
    expect(invoiceRows).toEqual([
      "display the invoices",
      "please list the invoices stampede",
      "can you list the invoices",
    ]);
  });

  it("filters by operation", async () => {
    const mock = makeSeededMock();
    const vm = new ReviewViewModel(new ApiClient(mock.fetch), mock.projectId);
    await vm.load();
    await vm.loadCandidates("delete:/users/{id}");
    expect(vm.candidates.every((r) => r.intent_id === "delete:/users/{id}")).toBe(true);
    expect(vm.candidates).toHaveLength(2);
  });

  it("counts statuses from the server view", async () => {
    const mock = makeSeededMock();
    const vm = new ReviewViewModel(new ApiClient(mock.fetch), mock.projectId);
    await vm.load();
    expect(vm.counts).toEqual({ accepted: 0, rejected: 0, auto_selected: 3, pending: 2 });
  });
});

describe("decision buffer", () => {
  it("toggles decisions and marks rows", async () => {
    const mock = makeSeededMock();
    const vm = new ReviewViewModel(new ApiClient(mock.fetch), mock.projectId);
    await vm.load();
    const row = vm.candidates[0]!;

    vm.markDecision(row.candidate_id, "accepted");
    expect(vm.decisionBuffer.get(row.candidate_id)).toBe("accepted");
    vm.markDecision(row.candidate_id, "rejected");
    expect(vm.decisionBuffer.get(row.candidate_id)).toBe("rejected");
    vm.markDecision(row.candidate_id, "rejected"); // same key toggles off
    expect(vm.decisionBuffer.size).toBe(0);
  });

  it("submitting an empty buffer is a no-op", async () => {
    const mock = makeSeededMock();
    const vm = new ReviewViewModel(new ApiClient(mock.fetch), mock.projectId);
    await vm.load();
    const requestsBefore = mock.requests.length;
    expect(await vm.submitDecisions()).toBe(true);
    expect(mock.requests.length).toBe(requestsBefore);
  });
});

describe("banners", () => {
  it("names the failing generator after generate", async () => {
    const mock = makeSeededMock();
    mock.generateFailures = [
      { generator_id: "para-model", code: "backend_unreachable", detail: "connection refused" },
    ];
    const vm = new ReviewViewModel(new ApiClient(mock.fetch), mock.projectId);
    await vm.load();
    await vm.generate();
    expect(vm.banner?.kind).toBe("error");
    expect(vm.banner?.message).toContain("para-model");
  });
});

describe("api client", () => {
  it("parses structured errors", async () => {
    const client = new ApiClient(async () =>
      new Response(JSON.stringify({ error: "no_model", detail: "train first" }), {
        status: 409,
      }),
    );
    await expect(client.train("p")).rejects.toThrowError(ServiceError);
    await expect(client.train("p")).rejects.toMatchObject({
      code: "no_model",
      status: 409,
    });
  });

  it("builds candidate query parameters", async () => {
    const seen: string[] = [];
    const client = new ApiClient(async (input) => {
      seen.push(input);
      return new Response(JSON.stringify({ candidates: [] }), { status: 200 });
    });
    await client.candidates("p1", { operation: "get:/x", status: "pending" });
    expect(seen[0]).toBe("/api/projects/p1/candidates?operation=get%3A%2Fx&status=pending");
  });

  it("export url carries the format", () => {
    const client = new ApiClient(async () => new Response("{}"));
    expect(client.exportUrl("p1", "csv")).toBe("/api/projects/p1/export?format=csv");
  });
});
