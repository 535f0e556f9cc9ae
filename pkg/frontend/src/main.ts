import { AnnotationClient } from "./api.js";
import {
  renderError,
  renderFinished,
  renderTask,
} from "./render.js";
import { SessionController } from "./session.js";

const SHOW_TARGET_MENU =
  new URLSearchParams(window.location.search).get("targets") === "1";

function sessionName(): string {
  const fromUrl = new URLSearchParams(window.location.search).get("session");
  if (fromUrl) return fromUrl;
  const stored = window.localStorage.getItem("commentlens-session");
  if (stored) return stored;
  const generated = `anon-${Math.random().toString(36).slice(2, 8)}`;
  window.localStorage.setItem("commentlens-session", generated);
  return generated;
}

function mount(): HTMLElement {
  const el = document.getElementById("app");
  if (!el) throw new Error("missing #app container");
  return el;
}

async function refresh(controller: SessionController,
                       root: HTMLElement): Promise<void> {
  const state = controller.state;
  if (state.kind === "task") {
    root.innerHTML = renderTask(state.view, SHOW_TARGET_MENU);
    const category = document.getElementById("category") as HTMLSelectElement;
    category.addEventListener("change", () =>
      controller.selectCategory(category.value),
    );
    const target = document.getElementById("target") as
      HTMLSelectElement | null;
    target?.addEventListener("change", () =>
      controller.selectTarget(target.value || null),
    );
    const submit = document.getElementById("submit") as HTMLButtonElement;
    submit.addEventListener("click", async () => {
      try {
        await controller.submit();
      } catch (err) {
        window.alert(err instanceof Error ? err.message : String(err));
        return;
      }
      await refresh(controller, root);
    });
  } else if (state.kind === "finished") {
    root.innerHTML = renderFinished(state.progress);
  } else if (state.kind === "error") {
    root.innerHTML = renderError(state.message);
  }
}

async function boot(): Promise<void> {
  const controller = new SessionController(
    new AnnotationClient(""),
    sessionName(),
  );
  const root = mount();
  await controller.load();
  await refresh(controller, root);
}

boot().catch((err) => {
  mount().innerHTML = renderError(String(err));
});
