/** Hash-routed single-page console over the repository service API. */

import { notify } from "./render.js";
import { AppState } from "./state.js";
import { renderComparePage } from "./views/compare.js";
import { renderRepositoryPage } from "./views/repository.js";
import { renderTechniquePage } from "./views/technique.js";

const state = new AppState();

async function route(): Promise<void> {
  const root = document.getElementById("page");
  if (!root) return;
  const hash = window.location.hash || "#/repository";
  const [, page, arg] = hash.split("/");
  try {
    if (page === "technique" && arg) {
      await renderTechniquePage(root, state, decodeURIComponent(arg));
    } else if (page === "compare") {
      await renderComparePage(root, state);
    } else {
      await renderRepositoryPage(root, state);
    }
  } catch (error) {
    notify(String(error), "error");
  }
  highlightNav(hash);
}

function highlightNav(hash: string): void {
  document.querySelectorAll("nav a").forEach((anchor) => {
    const link = anchor as HTMLAnchorElement;
    link.classList.toggle("active", link.getAttribute("href") === hash);
  });
}

async function buildNav(): Promise<void> {
  const nav = document.getElementById("nav");
  if (!nav) return;
  const links: [string, string][] = [["#/repository", "repository"]];
  try {
    for (const descriptor of await state.api.techniques()) {
      links.push([`#/technique/${encodeURIComponent(descriptor.name)}`, descriptor.name]);
    }
  } catch (error) {
    notify(String(error), "error");
  }
  links.push(["#/compare", "compare"]);
  for (const [href, label] of links) {
    const anchor = document.createElement("a");
    anchor.href = href;
    anchor.textContent = label;
    nav.append(anchor);
  }
}

window.addEventListener("hashchange", () => void route());
void buildNav().then(route);
