import "./style.css";
import { SdclabClient } from "./api";
import { SessionStore, type Screen } from "./state";
import { renderClassify } from "./views/classify";
import { renderDashboard } from "./views/dashboard";
import { renderReport } from "./views/report";
import { renderScenarios } from "./views/scenarios";
import { renderTransform } from "./views/transform";
import { renderUpload } from "./views/upload";
import { renderUtility } from "./views/utility";

const SCREENS: { id: Screen; label: string }[] = [
  { id: "upload", label: "Upload & Schema" },
  { id: "classify", label: "Classification" },
  { id: "scenarios", label: "Scenarios" },
  { id: "transform", label: "Transform Studio" },
  { id: "dashboard", label: "Risk Dashboard" },
  { id: "utility", label: "Utility" },
  { id: "report", label: "Report" },
];

const RENDERERS: Record<Screen, (root: HTMLElement, store: SessionStore) => void> = {
  upload: renderUpload,
  classify: renderClassify,
  scenarios: renderScenarios,
  transform: renderTransform,
  dashboard: renderDashboard,
  utility: renderUtility,
  report: renderReport,
};

export function mountApp(root: HTMLElement, store: SessionStore): void {
  root.innerHTML = `
    <header>
      <h1>sdclab</h1>
      <nav id="nav"></nav>
      <div id="status"></div>
    </header>
    <main id="screen"></main>
  `;
  const nav = root.querySelector<HTMLElement>("#nav")!;
  const status = root.querySelector<HTMLElement>("#status")!;
  const screenHost = root.querySelector<HTMLElement>("#screen")!;

  const render = () => {
    const state = store.get();
    nav.innerHTML = SCREENS.map(
      ({ id, label }) =>
        `<button data-screen="${id}" class="${state.screen === id ? "active" : ""}">${label}</button>`,
    ).join("");
    for (const button of nav.querySelectorAll<HTMLButtonElement>("[data-screen]")) {
      button.addEventListener("click", () =>
        store.goTo(button.dataset.screen as Screen),
      );
    }
    status.innerHTML = state.error
      ? `<span class="error">${state.error}</span>`
      : state.busy
        ? `<span class="muted">working…</span>`
        : state.sessionId
          ? `<span class="muted">session <code>${state.sessionId}</code></span>`
          : "";
    screenHost.innerHTML = "";
    RENDERERS[state.screen](screenHost, store);
    if (state.sessionId) {
      window.location.hash = `session=${state.sessionId}`;
    }
  };

  store.subscribe(render);
  render();

  // deep link: #session=<id> rehydrates the dashboard from GET endpoints only
  const match = window.location.hash.match(/session=([0-9a-f]+)/);
  if (match) void store.rehydrate(match[1]);
}

if (!import.meta.env?.VITEST) {
  const root = document.querySelector<HTMLDivElement>("#app");
  if (root) {
    mountApp(root, new SessionStore(new SdclabClient("")));
  }
}
