// Entry point: resolve config, wire the store, poller, and renderer.

import { ApiClient, NetworkError } from './api.js';
import { Poller } from './poller.js';
import { QueueStore } from './queue.js';
import { render } from './render.js';
import type { Template } from './types.js';

function resolveConfig(): { baseUrl: string; supervisor: string } {
  const params = new URLSearchParams(window.location.search);
  const baseUrl =
    params.get('api') ?? localStorage.getItem('sigcloud.api') ?? 'http://127.0.0.1:8000';
  const supervisor =
    params.get('supervisor') ?? localStorage.getItem('sigcloud.supervisor') ?? 'supervisor';
  localStorage.setItem('sigcloud.api', baseUrl);
  localStorage.setItem('sigcloud.supervisor', supervisor);
  return { baseUrl, supervisor };
}

const { baseUrl, supervisor } = resolveConfig();
const api = new ApiClient(baseUrl);
const store = new QueueStore(api, supervisor);

const root = document.getElementById('queue');
if (!root) throw new Error('missing #queue container');

const header = document.getElementById('meta');
if (header) header.textContent = `${baseUrl} · supervisor ${supervisor}`;

// template fetches are cached per client+version so cards render cheaply
const templateCache = new Map<string, Promise<Template>>();
const loadTemplate = (clientId: string): Promise<Template> => {
  let cached = templateCache.get(clientId);
  if (!cached) {
    cached = api.getTemplate(clientId);
    cached.catch(() => templateCache.delete(clientId));
    templateCache.set(clientId, cached);
  }
  return cached;
};

store.subscribe((snap) => render(snap, { root, store, loadTemplate }));

const poller = new Poller(async () => {
  templateCache.clear(); // versions may have moved on
  try {
    await store.refresh();
    return true;
  } catch (err) {
    if (err instanceof NetworkError) return false;
    throw err;
  }
});
poller.start();
