import { defineConfig } from "vite";

export default defineConfig({
  build: { outDir: "dist" },
  server: {
    proxy: {
      // during development the annotation service runs separately
      "/api": { target: "http://127.0.0.1:8400", changeOrigin: true, rewrite: p => p.replace(/^\/api/, "") },
    },
  },
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
  },
});
