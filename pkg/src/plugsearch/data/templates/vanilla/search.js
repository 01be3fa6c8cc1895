/* Static search page driven by config.json and the /search HTTP endpoint.
 * Query and page live in the URL fragment so result pages are shareable. */
(function () {
  "use strict";

  var config = { service_url: "", title: "Search", results_per_page: 20 };
  var state = { query: "", page: 0, total: 0 };

  var el = function (id) { return document.getElementById(id); };

  function markupSnippet(snippet) {
    var out = document.createElement("span");
    snippet.split(/(⟦[^⟧]*⟧)/).forEach(function (part) {
      if (part.charAt(0) === "⟦") {
        var em = document.createElement("em");
        em.textContent = part.slice(1, -1);
        out.appendChild(em);
      } else if (part) {
        out.appendChild(document.createTextNode(part));
      }
    });
    return out;
  }

  function showError(message) {
    var banner = el("error");
    banner.textContent = message;
    banner.style.display = "block";
  }

  function clearError() {
    el("error").style.display = "none";
  }

  function numPages() {
    return Math.max(1, Math.ceil(state.total / config.results_per_page));
  }

  function renderRows(body) {
    var results = el("results");
    results.textContent = "";
    state.total = body.total_results;
    el("summary").textContent = body.total_results + " results";
    body.rows.forEach(function (row) {
      var div = document.createElement("div");
      div.className = "result";
      var head = document.createElement("div");
      var docid = document.createElement("span");
      docid.className = "docid";
      docid.textContent = row.id;
      var score = document.createElement("span");
      score.className = "score";
      score.textContent = row.score.toFixed(4);
      head.appendChild(docid);
      head.appendChild(score);
      var snip = document.createElement("div");
      snip.className = "snippet";
      snip.appendChild(markupSnippet(row.snippet));
      div.appendChild(head);
      div.appendChild(snip);
      results.appendChild(div);
    });
    renderPager();
  }

  function renderPager() {
    var pager = el("pager");
    pager.textContent = "";
    if (state.total === 0) return;
    var last = numPages() - 1;
    var controls = [
      ["First", 0], ["Prev", Math.max(0, state.page - 1)],
      ["Next", Math.min(last, state.page + 1)], ["Last", last]
    ];
    controls.forEach(function (pair) {
      var btn = document.createElement("button");
      btn.textContent = pair[0];
      btn.disabled = pair[1] === state.page;
      btn.addEventListener("click", function () { go(state.query, pair[1]); });
      pager.appendChild(btn);
    });
  }

  function search(query, page) {
    if (!query) return;
    clearError();
    var url = config.service_url.replace(/\/$/, "") + "/search?q=" +
      encodeURIComponent(query) + "&page=" + page +
      "&per_page=" + config.results_per_page;
    fetch(url).then(function (resp) {
      return resp.json().then(function (body) {
        if (!resp.ok) throw new Error(body.detail || body.error || resp.status);
        state.query = query;
        state.page = page;
        renderRows(body);
      });
    }).catch(function (err) { showError("Search failed: " + err.message); });
  }

  function go(query, page) {
    location.hash = "q=" + encodeURIComponent(query) + "&page=" + page;
  }

  function applyHash() {
    var params = new URLSearchParams(location.hash.replace(/^#/, ""));
    var query = params.get("q") || "";
    var page = parseInt(params.get("page") || "0", 10) || 0;
    el("query").value = query;
    if (query) search(query, page);
  }

  fetch("config.json").then(function (resp) { return resp.json(); })
    .then(function (loaded) {
      config = Object.assign(config, loaded);
      el("title").textContent = config.title;
      document.title = config.title;
      applyHash();
    })
    .catch(function () { showError("Could not load config.json"); });

  el("submit").addEventListener("click", function () {
    go(el("query").value, 0);
  });
  el("query").addEventListener("keydown", function (ev) {
    if (ev.key === "Enter") go(el("query").value, 0);
  });
  window.addEventListener("hashchange", applyHash);
})();
