import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    // the e2e suite builds fixture corpora and boots the Python service
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
