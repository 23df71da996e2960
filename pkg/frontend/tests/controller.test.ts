import { describe, expect, it } from "vitest";

import { ReviewApi } from "../src/api.js";
import { ReviewController } from "../src/controller.js";
import { FIXTURE_META, fakeServer, makeTask } from "./fake_server.js";

function threeTaskQueue() {
  return fakeServer([
    makeTask({ task_id: "t1" }),
    makeTask({ task_id: "t2" }),
    makeTask({ task_id: "t3" }),
  ]);
}

function controllerOver(server = threeTaskQueue(), annotator = "ann") {
  const api = new ReviewApi("http://fake", server.fetch);
  return { server, controller: new ReviewController(api, annotator, 10) };
}

describe("queue listing", () => {
  it("lists the 3-task fixture queue after init", async () => {
    const { controller } = controllerOver();
    await controller.init();
    const state = controller.getState();
    expect(state.phase).toBe("ready");
    expect(state.page?.total).toBe(3);
    expect(state.page?.tasks.every((t) => t.status === "pending")).toBe(true);
    expect(state.current?.task_id).toBe("t1");
  });

  it("shows an empty state for an empty queue", async () => {
    const { controller } = controllerOver(fakeServer([]));
    await controller.init();
    const state = controller.getState();
    expect(state.page?.total).toBe(0);
    expect(state.current).toBeNull();
  });

  it("applies backend filters server-side", async () => {
    const server = fakeServer([
      makeTask({ task_id: "t1", backend_id: "messy" }),
      makeTask({ task_id: "t2", backend_id: "other" }),
    ]);
    const { controller } = controllerOver(server);
    await controller.init();
    await controller.setFilters({ backend: "messy" });
    const state = controller.getState();
    expect(state.page?.total).toBe(1);
    expect(state.page?.tasks[0]?.backend_id).toBe("messy");
  });

  it("surfaces transport errors non-destructively with retry", async () => {
    const server = threeTaskQueue();
    server.failNextRequests = 1;
    const { controller } = controllerOver(server);
    await controller.init();
    expect(controller.getState().phase).toBe("error");
    expect(controller.getState().errorMessage).toContain("network");
    await controller.init(); // retry succeeds
    expect(controller.getState().phase).toBe("ready");
    expect(controller.getState().page?.total).toBe(3);
  });
});

describe("label form closure", () => {
  it("offers exactly classes plus Other", async () => {
    const { controller } = controllerOver();
    await controller.init();
    expect(controller.labelSpace()).toEqual(["B", "GCA", "GVHD", "COP", "Other"]);
  });

  it("refuses to stage a disease outside the space", async () => {
    const { controller } = controllerOver();
    await controller.init();
    controller.stageDisease("Lupus");
    expect(controller.getState().staged.disease).toBeNull();
    controller.stageDiseaseByIndex(99);
    expect(controller.getState().staged.disease).toBeNull();
    controller.stageDiseaseByIndex(4);
    expect(controller.getState().staged.disease).toBe("Other");
  });

  it("cannot submit without both fields", async () => {
    const { controller } = controllerOver();
    await controller.init();
    expect(await controller.submitStaged()).toBe("incomplete");
    controller.stageIdentification("no");
    expect(controller.canSubmit()).toBe(false);
    controller.stageDisease("Other");
    expect(controller.canSubmit()).toBe(true);
  });
});

describe("submitting labels", () => {
  it("labels the task, drops it from pending, and advances", async () => {
    const { server, controller } = controllerOver();
    await controller.init();
    controller.stageIdentification("no");
    controller.stageDisease("Other");
    expect(await controller.submitStaged()).toBe("ok");

    const state = controller.getState();
    expect(server.tasks.get("t1")?.status).toBe("labeled");
    expect(state.page?.total).toBe(2);
    expect(state.page?.tasks.map((t) => t.task_id)).toEqual(["t2", "t3"]);
    expect(state.current?.task_id).toBe("t2"); // advanced to next pending
    expect(state.stats?.queue).toEqual({ pending: 2, labeled: 1 });
  });

  it("keyboard staging drives the same path", async () => {
    const { server, controller } = controllerOver();
    await controller.init();
    controller.stageIdentification("yes");
    controller.stageDiseaseByIndex(0); // hotkey "1" -> B
    expect(await controller.submitStaged()).toBe("ok");
    expect(server.tasks.get("t1")?.label).toMatchObject({
      identification: "yes",
      disease: "B",
    });
  });

  it("double submit yields one success and one conflict", async () => {
    const server = threeTaskQueue();
    const first = controllerOver(server, "first").controller;
    const second = controllerOver(server, "second").controller;
    await first.init();
    await second.init();
    expect(first.getState().current?.task_id).toBe("t1");
    expect(second.getState().current?.task_id).toBe("t1");

    first.stageIdentification("no");
    first.stageDisease("Other");
    second.stageIdentification("yes");
    second.stageDisease("B");

    const results = [await first.submitStaged(), await second.submitStaged()];
    expect(results.filter((r) => r === "ok")).toHaveLength(1);
    expect(results.filter((r) => r === "conflict")).toHaveLength(1);

    // first writer won; loser reloaded the task state non-destructively
    expect(server.tasks.get("t1")?.label?.annotator_id).toBe("first");
    const loser = second.getState();
    expect(loser.notice).toContain("already labeled");
    expect(loser.current?.task_id).toBe("t1");
    expect(loser.current?.status).toBe("labeled");
  });

  it("labeling everything empties the queue", async () => {
    const { controller } = controllerOver();
    await controller.init();
    for (let i = 0; i < 3; i += 1) {
      controller.stageIdentification("no");
      controller.stageDisease("Other");
      expect(await controller.submitStaged()).toBe("ok");
    }
    const state = controller.getState();
    expect(state.page?.total).toBe(0);
    expect(state.current).toBeNull();
    expect(state.stats?.queue).toEqual({ pending: 0, labeled: 3 });
  });
});

describe("meta fixture sanity", () => {
  it("fixture label space matches classes plus Other", () => {
    expect(FIXTURE_META.label_space).toEqual([
      ...FIXTURE_META.classes.map((c) => c.disease_id),
      "Other",
    ]);
  });
});
