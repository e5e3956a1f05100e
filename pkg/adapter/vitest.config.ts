import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    environment: "node",
    // The conformance test shells out to the core CLI; give it room.
    testTimeout: 60_000,
  },
});
