import { StudioApi } from "./api.js";
import { initApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("service") ?? "http://127.0.0.1:8787";

const root = document.querySelector<HTMLElement>("#app");
if (!root) {
  throw new Error("missing #app container");
}
initApp(root, new StudioApi(baseUrl)).catch((err) => {
  root.textContent = `failed to start: ${err}`;
});
