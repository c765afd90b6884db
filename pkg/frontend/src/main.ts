import { ApiClient } from "./api.js";
import { Studio } from "./panels.js";

const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "http://127.0.0.1:8008";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

const canvas = document.createElement("canvas");
canvas.width = 720;
canvas.height = 540;

new Studio(root, new ApiClient(apiBase), canvas);
