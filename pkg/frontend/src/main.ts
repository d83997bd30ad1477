import { SearchApi } from './api.js';
import { mountApp } from './ui.js';

// Service origin: ?api=http://host:port, defaulting to the page's origin.
const params = new URLSearchParams(window.location.search);
const baseUrl = params.get('api') ?? window.location.origin;

mountApp(document.getElementById('app')!, new SearchApi(baseUrl));
