// DOM wiring: three views (Operations, Review, Test Console) over one
// ReviewViewModel. Keyboard: j/k move the row cursor, a accepts, r rejects.

import { ApiClient } from "./api";
import { ReviewViewModel } from "./viewmodel";
import type { SeedGroup } from "./viewmodel";

const api = new ApiClient((input, init) => fetch(input, init));

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function must(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

class App {
  private vm: ReviewViewModel | null = null;
  private cursor = 0;

  async start(): Promise<void> {
    must("project-create").addEventListener("click", () => void this.createProject());
    must("project-open").addEventListener("click", () => void this.openSelectedProject());
    must("spec-upload").addEventListener("click", () => void this.uploadSpec());
    must("generate").addEventListener("click", () => void this.generate());
    must("submit-reviews").addEventListener("click", () => void this.submitReviews());
    must("train").addEventListener("click", () => void this.train());
    must("probe-form").addEventListener("submit", (event) => {
      event.preventDefault();
      void this.probe();
    });
    document.addEventListener("keydown", (event) => this.onKey(event));
    await this.refreshProjectList();
  }

  private async refreshProjectList(): Promise<void> {
    const select = must("project-select") as HTMLSelectElement;
    const { projects } = await api.listProjects();
    select.innerHTML = "";
    for (const project of projects) {
      const option = el("option");
      option.value = project.project_id;
      option.textContent = `${project.name} (${project.project_id})`;
      select.appendChild(option);
    }
  }

  private async createProject(): Promise<void> {
    const name = (must("project-name") as HTMLInputElement).value.trim();
    if (!name) return;
    const project = await api.createProject(name);
    await this.refreshProjectList();
    (must("project-select") as HTMLSelectElement).value = project.project_id;
    await this.openProject(project.project_id);
  }

  private async openSelectedProject(): Promise<void> {
    const id = (must("project-select") as HTMLSelectElement).value;
    if (id) await this.openProject(id);
  }

  private async openProject(projectId: string): Promise<void> {
    this.vm = new ReviewViewModel(api, projectId);
    await this.vm.load();
    this.render();
  }

  private async uploadSpec(): Promise<void> {
    if (!this.vm) return;
    const input = must("spec-file") as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    await api.ingestSpec(this.vm.projectId, await file.text());
    await this.vm.load();
    this.render();
  }

  private async generate(): Promise<void> {
    if (!this.vm) return;
    await this.vm.generate();
    this.render();
  }

  private async submitReviews(): Promise<void> {
    if (!this.vm) return;
    await this.vm.submitDecisions();
    this.render();
  }

  private async train(): Promise<void> {
    if (!this.vm) return;
    await this.vm.train();
    this.render();
  }

  private async probe(): Promise<void> {
    if (!this.vm) return;
    const input = must("probe-text") as HTMLInputElement;
    const text = input.value.trim();
    if (!text) return;
    await this.vm.probe(text);
    input.value = "";
    this.render();
  }

  private onKey(event: KeyboardEvent): void {
    if (!this.vm || event.target instanceof HTMLInputElement) return;
    const rows = this.vm.candidates;
    if (rows.length === 0) return;
    if (event.key === "j") this.cursor = Math.min(this.cursor + 1, rows.length - 1);
    else if (event.key === "k") this.cursor = Math.max(this.cursor - 1, 0);
    else if (event.key === "a" || event.key === "r") {
      const row = rows[this.cursor];
      if (row) {
        this.vm.markDecision(row.candidate_id, event.key === "a" ? "accepted" : "rejected");
      }
    } else return;
    this.render();
  }

  private render(): void {
    const vm = this.vm;
    if (!vm) return;

    const banner = must("banner");
    banner.textContent = vm.banner?.message ?? "";
    banner.className = vm.banner ? `banner ${vm.banner.kind}` : "banner hidden";

    this.renderOperations();
    this.renderReview();
    this.renderConsole();
  }

  private renderOperations(): void {
    const vm = this.vm!;
    const container = must("operations");
    container.innerHTML = "";
    for (const op of vm.operations) {
      const card = el("div", "operation-card");
      const title = el("div", "operation-title", `${op.method} ${op.path}`);
      card.appendChild(title);
      const phrase = op.seeds.find((seed) => seed.phrase)?.phrase;
      if (phrase) {
        card.appendChild(
          el("div", "phrase-preview", `${phrase.verb} ${phrase.object.join(" ")}`),
        );
      }
      card.appendChild(el("div", "seed-count", `${op.seeds.length} seed utterances`));
      card.addEventListener("click", () => {
        void vm.loadCandidates(op.intent_id).then(() => this.render());
      });
      container.appendChild(card);
    }
  }

  private renderReview(): void {
    const vm = this.vm!;
    const container = must("review-groups");
    container.innerHTML = "";
    if (vm.candidates.length === 0) {
      container.appendChild(
        el("div", "empty-state", "no candidates yet; ingest a spec and generate"),
      );
      return;
    }
    let index = 0;
    for (const group of vm.groupsBySeed()) {
      container.appendChild(this.renderGroup(group, () => index++));
    }
    const counts = vm.counts;
    must("review-counts").textContent = counts
      ? `accepted ${counts.accepted} · rejected ${counts.rejected} · ` +
        `auto ${counts.auto_selected} · pending ${counts.pending}`
      : "";
  }

  private renderGroup(group: SeedGroup, nextIndex: () => number): HTMLElement {
    const vm = this.vm!;
    const section = el("section", "seed-group");
    section.appendChild(el("h3", "seed-heading", `seed: ${group.seedText}`));
    const table = el("table", "candidate-table");
    for (const row of group.rows) {
      const index = nextIndex();
      const tr = el("tr", index === this.cursor ? "row cursor" : "row");
      tr.appendChild(el("td", "text", row.text));
      tr.appendChild(el("td", `badge gen-${row.generator_id}`, row.generator_id));
      const similarity = row.similarity_to_seed;
      const simCell = el("td", "similarity", similarity === null ? "·" : similarity.toFixed(3));
      if (row.delta_ngram !== undefined) {
        simCell.title = `adds ${row.delta_ngram} new n-grams at similarity ${
          similarity === null ? "?" : similarity.toFixed(3)
        }`;
      }
      tr.appendChild(simCell);
      const status = row.pendingDecision ? `${row.status} → ${row.pendingDecision}` : row.status;
      tr.appendChild(el("td", `status ${row.status}`, status));
      const actions = el("td", "actions");
      const accept = el("button", "accept", "accept");
      accept.addEventListener("click", () => {
        vm.markDecision(row.candidate_id, "accepted");
        this.render();
      });
      const reject = el("button", "reject", "reject");
      reject.addEventListener("click", () => {
        vm.markDecision(row.candidate_id, "rejected");
        this.render();
      });
      actions.append(accept, reject);
      tr.appendChild(actions);
      table.appendChild(tr);
    }
    section.appendChild(table);

    const editForm = el("form", "edit-form");
    const editInput = el("input") as HTMLInputElement;
    editInput.placeholder = "add your own utterance for this intent";
    const editButton = el("button", "add", "add as accepted");
    editForm.append(editInput, editButton);
    editForm.addEventListener("submit", (event) => {
      event.preventDefault();
      const text = editInput.value.trim();
      if (!text) return;
      void vm.addEditedCandidate(group.intentId, text).then(() => this.render());
    });
    section.appendChild(editForm);
    return section;
  }

  private renderConsole(): void {
    const vm = this.vm!;
    const status = must("training-status");
    status.textContent = vm.trainingStatus
      ? `trained on ${vm.trainingStatus.n_examples} utterances across ` +
        `${Object.keys(vm.trainingStatus.intents).length} intents`
      : "model not trained yet";
    (must("probe-text") as HTMLInputElement).disabled = !vm.modelTrained;

    const log = must("transcript");
    log.innerHTML = "";
    for (const entry of vm.transcript) {
      const line = el("div", "transcript-entry");
      const operation = entry.operation
        ? ` → ${entry.operation.method} ${entry.operation.path}`
        : "";
      line.textContent =
        `"${entry.text}" → ${entry.intentId} (${entry.confidence.toFixed(3)})${operation}`;
      log.appendChild(line);
    }
  }
}

void new App().start();
