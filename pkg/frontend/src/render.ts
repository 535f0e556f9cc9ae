import { Progress, TaskView } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Snippet as numbered lines; the comment's own lines are highlighted. */
export function renderSnippet(view: TaskView): string {
  const lines = view.snippet.split("\n");
  const rows = lines.map((line, i) => {
    const lineNo = view.snippet_first_line + i;
    const highlighted =
      lineNo >= view.comment_start_line && lineNo <= view.comment_end_line;
    const cls = highlighted ? ' class="comment-line"' : "";
    return (
      `<tr${cls}><td class="lineno">${lineNo}</td>` +
      `<td class="code">${escapeHtml(line) || "&nbsp;"}</td></tr>`
    );
  });
  return `<table class="snippet">${rows.join("")}</table>`;
}

/** Category dropdown; guideline text rides along as hover help. */
export function renderCategoryMenu(view: TaskView): string {
  const options = view.categories.map((label) => {
    const hint = escapeHtml(view.guidelines[label] ?? "");
    return `<option value="${escapeHtml(label)}" title="${hint}">` +
      `${escapeHtml(label)}</option>`;
  });
  return (
    `<select id="category" size="${view.categories.length}">` +
    `${options.join("")}</select>`
  );
}

export function renderTargetMenu(view: TaskView): string {
  const options = view.targets.map(
    (label) =>
      `<option value="${escapeHtml(label)}">${escapeHtml(label)}</option>`,
  );
  return (
    '<select id="target"><option value="">(skip target)</option>' +
    options.join("") +
    "</select>"
  );
}

export function renderProgress(progress: Progress): string {
  return `<span id="progress">${progress.done} / ${progress.total}</span>`;
}

export function renderTask(view: TaskView, withTargets: boolean): string {
  const location = `${view.project}/${view.path}:${view.comment_start_line}`;
  const context = view.context_link
    ? ` <a href="${escapeHtml(view.context_link)}" target="_blank">` +
      "wider context</a>"
    : "";
  const target = withTargets
    ? `<div class="row"><label>Target</label>${renderTargetMenu(view)}</div>`
    : "";
  return `
<div class="task" data-task-id="${escapeHtml(view.task_id)}">
  <div class="meta">${escapeHtml(location)}${context}
    ${renderProgress({ done: view.done, total: view.total })}</div>
  ${renderSnippet(view)}
  <div class="row"><label>Category</label>${renderCategoryMenu(view)}</div>
  ${target}
  <div class="row"><button id="submit">Save and next</button></div>
</div>`;
}

export function renderFinished(progress: Progress): string {
  return (
    `<div class="done"><p>All ${progress.total} tasks annotated.</p>` +
    "<p>Export with <code>/api/export?sessions=...</code> and measure " +
    "agreement with <code>commentlens agree</code>.</p></div>"
  );
}

export function renderError(message: string): string {
  return `<div class="error">${escapeHtml(message)}</div>`;
}
