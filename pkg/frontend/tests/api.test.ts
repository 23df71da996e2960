import { describe, expect, it } from "vitest";

import { ApiError, ReviewApi } from "../src/api.js";
import { fakeServer, makeTask } from "./fake_server.js";

function apiOver(server = fakeServer([makeTask({ task_id: "t1" })])) {
  return { server, api: new ReviewApi("http://fake", server.fetch) };
}

describe("ReviewApi", () => {
  it("passes filters and pagination as query params", async () => {
    const { server, api } = apiOver();
    await api.listTasks({ backend: "messy", context: 16, page: 2, pageSize: 5 });
    const url = server.requests[0]!;
    expect(url).toContain("backend=messy");
    expect(url).toContain("context=16");
    expect(url).toContain("page=2");
    expect(url).toContain("page_size=5");
  });

  it("posts labels as JSON and returns the updated task", async () => {
    const { api } = apiOver();
    const updated = await api.submitLabel("t1", "no", "Other", "ann");
    expect(updated.status).toBe("labeled");
    expect(updated.label).toMatchObject({
      identification: "no",
      disease: "Other",
      annotator_id: "ann",
    });
  });

  it("maps 409 onto a conflict ApiError", async () => {
    const { api } = apiOver();
    await api.submitLabel("t1", "no", "Other", "first");
    const error = await api
      .submitLabel("t1", "yes", "B", "second")
      .catch((e: unknown) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect((error as ApiError).isConflict).toBe(true);
    expect((error as ApiError).detail).toContain("already labeled");
  });

  it("maps 404 and 422 onto non-conflict ApiErrors", async () => {
    const { api } = apiOver();
    const missing = await api.getTask("nope").catch((e: unknown) => e);
    expect((missing as ApiError).status).toBe(404);
    const invalid = await api
      .submitLabel("t1", "yes", "Lupus", "x")
      .catch((e: unknown) => e);
    expect((invalid as ApiError).status).toBe(422);
    expect((invalid as ApiError).isConflict).toBe(false);
  });
});
