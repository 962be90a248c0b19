import { ApiClient } from "./api.js";
import { App } from "./app.js";

const params = new URLSearchParams(window.location.search);
const fallbackHost = window.location.hostname || "127.0.0.1";
const server = params.get("server") ?? `http://${fallbackHost}:8737`;

const app = new App(document, new ApiClient(server));
(window as unknown as { dyadcolApp: App }).dyadcolApp = app;

const serverLabel = document.getElementById("server-url");
if (serverLabel) serverLabel.textContent = server;
