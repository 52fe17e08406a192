/* Page shell: wires the question form, results pane, and maintenance view
 * together around one session. Mounting is separated from browser bootstrap
 * so tests can mount against a fake fetch and their own root element.
 */

import { ApiClient } from './api.js';
import { QuestionForm } from './form.js';
import { MaintenanceView } from './maintenance.js';
import { ResultsPane } from './results.js';
import { RecommendSession } from './session.js';

export interface MountOptions {
  api: ApiClient;
  kbName: string;
  debounceMs?: number;
}

export interface App {
  session: RecommendSession;
  form: QuestionForm;
  results: ResultsPane;
  maintenance: MaintenanceView;
  ready: Promise<void>;
  dispose(): void;
}

export function mountApp(root: HTMLElement, options: MountOptions): App {
  root.textContent = '';

  const header = document.createElement('header');
  const title = document.createElement('h2');
  title.textContent = `wrec: ${options.kbName}`;
  header.appendChild(title);

  const tabs = document.createElement('nav');
  tabs.className = 'tabs';
  const sessionTab = tabButton('tab-session', 'Session');
  const maintenanceTab = tabButton('tab-maintenance', 'Maintenance');
  tabs.appendChild(sessionTab);
  tabs.appendChild(maintenanceTab);
  header.appendChild(tabs);
  root.appendChild(header);

  const sessionPanel = document.createElement('div');
  sessionPanel.className = 'panel session-panel';
  const formRoot = document.createElement('div');
  formRoot.className = 'form-root';
  const resultsRoot = document.createElement('div');
  resultsRoot.className = 'results-root';
  sessionPanel.appendChild(formRoot);
  sessionPanel.appendChild(resultsRoot);
  root.appendChild(sessionPanel);

  const maintenancePanel = document.createElement('div');
  maintenancePanel.className = 'panel maintenance-panel';
  maintenancePanel.hidden = true;
  root.appendChild(maintenancePanel);

  const results = new ResultsPane(resultsRoot, {
    onApplyRepair: (changes) => session.applyRepair(changes),
    onPinItem: (item) => session.pinItem(item),
  });
  const session = new RecommendSession(
    options.api,
    options.kbName,
    (snapshot) => {
      form.refresh(snapshot.selections);
      results.render(snapshot);
    },
    options.debounceMs,
  );
  const form = new QuestionForm(formRoot, session);
  const maintenance = new MaintenanceView(maintenancePanel, options.api, options.kbName);

  let maintenanceLoaded = false;
  sessionTab.addEventListener('click', () => {
    sessionPanel.hidden = false;
    maintenancePanel.hidden = true;
    sessionTab.classList.add('active');
    maintenanceTab.classList.remove('active');
  });
  maintenanceTab.addEventListener('click', () => {
    sessionPanel.hidden = true;
    maintenancePanel.hidden = false;
    maintenanceTab.classList.add('active');
    sessionTab.classList.remove('active');
    if (!maintenanceLoaded) {
      maintenanceLoaded = true;
      void maintenance.load();
    }
  });
  sessionTab.classList.add('active');

  const ready = options.api.getKb(options.kbName).then((summary) => {
    form.render(summary.questions);
    // An empty selection is a valid query: it shows the whole assortment.
    session.queryNow();
  });

  return {
    session,
    form,
    results,
    maintenance,
    ready,
    dispose: () => session.dispose(),
  };
}

function tabButton(className: string, text: string): HTMLButtonElement {
  const button = document.createElement('button');
  button.type = 'button';
  button.className = className;
  button.textContent = text;
  return button;
}

/** Browser bootstrap: reads ?kb= and ?api= from the page URL. */
export function bootFromLocation(): void {
  const rootElement = document.getElementById('wrec-app');
  if (rootElement === null) {
    return;
  }
  const params = new URLSearchParams(window.location.search);
  const api = new ApiClient(params.get('api') ?? '');
  mountApp(rootElement, { api, kbName: params.get('kb') ?? 'pc' });
}

if (typeof document !== 'undefined' && document.getElementById('wrec-app') !== null) {
  bootFromLocation();
}
