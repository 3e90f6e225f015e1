// Bootstrap: connect the socket, feed the store, render on every change.

import { fetchCatalog, SocketClient, uploadIllustration } from "./net.js";
import { Store } from "./store.js";
import { renderApp, setRerender, type AppContext } from "./ui.js";

async function boot(): Promise<void> {
  const root = document.getElementById("app")!;
  const baseUrl = window.location.origin;
  const store = new Store();

  let catalog;
  try {
    catalog = await fetchCatalog(baseUrl);
  } catch (exc) {
    root.textContent = `Could not reach the match server at ${baseUrl}: ${exc}`;
    return;
  }

  const socket = new SocketClient(baseUrl, {
    onEnvelope: (envelope) => {
      if (envelope.kind === "match_found") {
        socket.token = envelope.payload.token;
      }
      store.apply(envelope);
    },
    onClose: () => store.resetStream(),
  });

  const ctx: AppContext = {
    store,
    catalog,
    baseUrl,
    send: (kind, payload) => socket.send(kind, payload),
    upload: async (blob, mediaType) => {
      const match = store.state.match;
      if (!match) throw new Error("no active match");
      await uploadIllustration(baseUrl, match.matchId, match.token, blob, mediaType);
    },
  };

  const rerender = () => renderApp(root, ctx);
  setRerender(rerender);
  store.subscribe(rerender);
  socket.connect();
  rerender();

  // keep the countdown ticking between server syncs; cheap when hidden
  setInterval(() => {
    const counter = document.getElementById("countdown");
    if (counter) counter.textContent = store.clock.display();
  }, 250);
}

boot();
