import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    // the service round-trip suite boots a real server process
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
