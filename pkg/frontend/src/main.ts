import { ApiClient } from "./api.js";
import { ConsoleApp } from "./console.js";
import { ConsoleState } from "./state.js";

const app = new ConsoleApp(document, new ApiClient(""), new ConsoleState());
void app.init();
