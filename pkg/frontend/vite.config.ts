/// <reference types="vitest/config" />
import { defineConfig } from "vite";

export default defineConfig({
  server: {
    // the dev server proxies API calls to a locally running `sdclab serve`
    proxy: {
      "/v1": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "jsdom",
    globalSetup: "./tests/global-setup.ts",
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});
