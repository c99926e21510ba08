import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    testTimeout: 900_000,
    hookTimeout: 900_000,
    // training and evaluation share cached fixtures; keep file order stable
    fileParallelism: false,
  },
});
