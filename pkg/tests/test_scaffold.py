import json

import pytest

from plugsearch.errors import TemplateError
from plugsearch.registry import RegistryLocation
from plugsearch.scaffold import (
    create_app,
    create_space_from_local,
    fetch_space_archive,
    list_templates,
)

CONTEXT = {
    "dset_text_field": "text",
    "metadata_field": "docid",
    "space_title": "MS MARCO Search",
    "local_app": "app",
}


class TestListTemplates:
    def test_vanilla_is_shipped(self):
        names = [d.name for d in list_templates()]
        assert "vanilla" in names

    def test_user_template_dir_discovered(self, tmp_path):
        custom = tmp_path / "templates" / "custom"
        custom.mkdir(parents=True)
        (custom / "template.json").write_text(
            json.dumps({"name": "custom", "required_keys": ["a_key"]})
        )
        descs = list_templates((tmp_path / "templates",))
        custom_desc = next(d for d in descs if d.name == "custom")
        assert custom_desc.required_keys == ("a_key",)

    def test_empty_search_path_is_builtins_only(self):
        assert [d.name for d in list_templates(())] == [
            d.name for d in list_templates()
        ]


class TestCreateApp:
    def test_renders_config_with_title(self, tmp_path):
        app_dir = create_app("vanilla", CONTEXT, tmp_path)
        assert app_dir == tmp_path / "app"
        config = json.loads((app_dir / "config.json").read_text())
        assert config["title"] == "MS MARCO Search"
        assert config["text_field"] == "text"
        assert config["metadata_field"] == "docid"
        assert (app_dir / "index.html").is_file()
        assert (app_dir / "search.js").is_file()

    def test_missing_key_names_it(self, tmp_path):
        context = {k: v for k, v in CONTEXT.items() if k != "space_title"}
        with pytest.raises(TemplateError, match="space_title"):
            create_app("vanilla", context, tmp_path)

    def test_unknown_key_is_error(self, tmp_path):
        with pytest.raises(TemplateError, match="spcae_title"):
            create_app("vanilla", {**CONTEXT, "spcae_title": "typo"}, tmp_path)

    def test_rendering_is_deterministic(self, tmp_path):
        d1 = create_app("vanilla", CONTEXT, tmp_path / "one")
        d2 = create_app("vanilla", CONTEXT, tmp_path / "two")
        files1 = sorted(p.relative_to(d1) for p in d1.rglob("*") if p.is_file())
        files2 = sorted(p.relative_to(d2) for p in d2.rglob("*") if p.is_file())
        assert files1 == files2
        for rel in files1:
            assert (d1 / rel).read_bytes() == (d2 / rel).read_bytes()

    def test_no_placeholder_survives(self, tmp_path):
        app_dir = create_app("vanilla", CONTEXT, tmp_path)
        for path in app_dir.rglob("*"):
            if path.is_file():
                assert "{{" not in path.read_text(encoding="utf-8"), path

    def test_placeholders_in_names_and_undeclared_key_errors(self, tmp_path):
        troot = tmp_path / "lib" / "named"
        troot.mkdir(parents=True)
        (troot / "template.json").write_text(
            json.dumps({"name": "named", "required_keys": ["slug", "local_app"]})
        )
        (troot / "{{ slug }}.txt").write_text("hi")
        app_dir = create_app(
            "named",
            {"slug": "greeting", "local_app": "out"},
            tmp_path,
            search_paths=(tmp_path / "lib",),
        )
        assert (app_dir / "greeting.txt").read_text() == "hi"

        (troot / "bad.txt.tmpl").write_text("{{ undeclared }}")
        with pytest.raises(TemplateError, match="undeclared"):
            create_app(
                "named",
                {"slug": "greeting", "local_app": "out2"},
                tmp_path,
                search_paths=(tmp_path / "lib",),
            )

    def test_unknown_template(self, tmp_path):
        with pytest.raises(TemplateError, match="unknown template"):
            create_app("nope", CONTEXT, tmp_path)


class TestCreateSpace:
    def registry(self, tmp_path):
        root = tmp_path / "registry-root"
        root.mkdir(exist_ok=True)
        return RegistryLocation(f"file://{root}", "demo-org")

    def test_push_round_trip(self, tmp_path):
        registry = self.registry(tmp_path)
        app_dir = create_app("vanilla", CONTEXT, tmp_path)
        local_files = {
            p.relative_to(app_dir).as_posix(): p.read_bytes()
            for p in app_dir.rglob("*")
            if p.is_file()
        }
        descriptor = create_space_from_local(
            "msmarco-passage-search", "demo-org", "static", app_dir, registry
        )
        assert descriptor.url.endswith("/spaces/demo-org/msmarco-passage-search/0")
        assert descriptor.sdk == "static"
        fetched = fetch_space_archive("msmarco-passage-search", registry)
        assert fetched == local_files

    def test_delete_after_push(self, tmp_path):
        registry = self.registry(tmp_path)
        app_dir = create_app("vanilla", CONTEXT, tmp_path)
        create_space_from_local(
            "s", "demo-org", "static", app_dir, registry, delete_after_push=True
        )
        assert not app_dir.exists()

    def test_failed_upload_never_deletes(self, tmp_path, monkeypatch):
        from plugsearch.errors import RegistryError
        from plugsearch.registry import RegistryClient

        registry = self.registry(tmp_path)
        app_dir = create_app("vanilla", CONTEXT, tmp_path)

        def boom(self, *args, **kwargs):
            raise RegistryError("upload failed")

        monkeypatch.setattr(RegistryClient, "push_archive", boom)
        with pytest.raises(RegistryError):
            create_space_from_local(
                "s", "demo-org", "static", app_dir, registry,
                delete_after_push=True,
            )
        assert app_dir.is_dir()

    def test_invalid_slug(self, tmp_path):
        from plugsearch.errors import RegistryError

        registry = self.registry(tmp_path)
        app_dir = create_app("vanilla", CONTEXT, tmp_path)
        with pytest.raises(RegistryError):
            create_space_from_local(
                "Invalid Slug", "demo-org", "static", app_dir, registry
            )
