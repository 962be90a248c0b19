import { defineConfig } from "vitest/config";

export default defineConfig({
    test: {
        include: ["test/**/*.test.ts"],
        environment: "happy-dom",
        // the end-to-end file boots a real server; give it room
        testTimeout: 120000,
        hookTimeout: 120000,
    },
});
