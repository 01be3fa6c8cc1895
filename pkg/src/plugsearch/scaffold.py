"""Generate runnable search-app directories from templates and publish them.

Templates are directory trees with a ``template.json`` descriptor at the
root. Files named ``*.tmpl`` get ``{{ key }}`` substitution (and lose the
suffix); everything else is copied verbatim. Placeholders also apply to
file and directory names. No logic, just flat string substitution.
"""

from __future__ import annotations

import io
import json
import re
import shutil
import tarfile
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from .errors import TemplateError
from .registry import RegistryClient, RegistryLocation

DESCRIPTOR_NAME = "template.json"

_PLACEHOLDER_RE = re.compile(r"\{\{\s*(\w+)\s*\}\}")


@dataclass(frozen=True)
class TemplateDescriptor:
    name: str
    path: Path
    description: str
    required_keys: tuple[str, ...]
    optional_keys: dict[str, str]  # key -> default value


@dataclass(frozen=True)
class SpaceDescriptor:
    slug: str
    organization: str
    sdk: str
    url: str
    pushed_at: str


def _builtin_templates_dir() -> Path:
    return Path(str(resources.files("plugsearch").joinpath("data/templates")))


def _read_descriptor(path: Path) -> TemplateDescriptor:
    desc_path = path / DESCRIPTOR_NAME
    if not desc_path.is_file():
        raise TemplateError(f"template at {path} lacks {DESCRIPTOR_NAME}")
    doc = json.loads(desc_path.read_text(encoding="utf-8"))
    return TemplateDescriptor(
        name=doc.get("name", path.name),
        path=path,
        description=doc.get("description", ""),
        required_keys=tuple(doc.get("required_keys", [])),
        optional_keys=dict(doc.get("optional_keys", {})),
    )


def list_templates(search_paths: tuple[str | Path, ...] = ()) -> list[TemplateDescriptor]:
    """Built-in template library plus any user template directories."""
    out: list[TemplateDescriptor] = []
    roots = [_builtin_templates_dir()] + [Path(p) for p in search_paths]
    for root in roots:
        if not root.is_dir():
            continue
        for child in sorted(root.iterdir()):
            if child.is_dir() and (child / DESCRIPTOR_NAME).is_file():
                out.append(_read_descriptor(child))
    return out


def _find_template(
    template: str, search_paths: tuple[str | Path, ...]
) -> TemplateDescriptor:
    for desc in list_templates(search_paths):
        if desc.name == template:
            return desc
    raise TemplateError(f"unknown template {template!r}")


def _substitute(text: str, context: dict[str, str], declared: set[str], where: str) -> str:
    def repl(m: re.Match) -> str:
        key = m.group(1)
        if key not in declared:
            raise TemplateError(
                f"template references undeclared key {key!r} in {where}"
            )
        return context[key]

    return _PLACEHOLDER_RE.sub(repl, text)


def create_app(
    template: str,
    context: dict[str, str],
    output_dir: str | Path = ".",
    search_paths: tuple[str | Path, ...] = (),
) -> Path:
    """Render a template into ``output_dir/{local_app}``.

    All declared required keys must be present; unknown context keys are an
    error (catches typos). Rendering the same inputs twice is byte-identical.
    """
    desc = _find_template(template, search_paths)
    declared = set(desc.required_keys) | set(desc.optional_keys)

    missing = [k for k in desc.required_keys if k not in context]
    if missing:
        raise TemplateError(
            f"missing required context keys: {', '.join(sorted(missing))}"
        )
    unknown = [k for k in context if k not in declared]
    if unknown:
        raise TemplateError(
            f"unknown context keys: {', '.join(sorted(unknown))}"
        )
    full_context = {**desc.optional_keys, **context}

    app_name = full_context.get("local_app", desc.name)
    dest_root = Path(output_dir) / app_name
    dest_root.mkdir(parents=True, exist_ok=True)

    for src in sorted(desc.path.rglob("*")):
        rel = src.relative_to(desc.path)
        if rel.parts[0] == DESCRIPTOR_NAME:
            continue
        rendered_rel = Path(
            *[_substitute(p, full_context, declared, str(rel)) for p in rel.parts]
        )
        target = dest_root / rendered_rel
        if src.is_dir():
            target.mkdir(parents=True, exist_ok=True)
        elif src.name.endswith(".tmpl"):
            target = target.with_name(target.name[: -len(".tmpl")])
            text = src.read_text(encoding="utf-8")
            target.write_text(
                _substitute(text, full_context, declared, str(rel)),
                encoding="utf-8",
            )
        else:
            shutil.copyfile(src, target)
    return dest_root


def archive_directory(local_dir: str | Path) -> bytes:
    """Deterministic .tar.gz of an app directory (relative paths)."""
    from .registry import build_archive_bytes

    root = Path(local_dir)
    files = {
        p.relative_to(root).as_posix(): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }
    return build_archive_bytes(files)


def create_space_from_local(
    space_slug: str,
    organization: str,
    sdk: str,
    local_dir: str | Path,
    registry: RegistryLocation,
    delete_after_push: bool = False,
) -> SpaceDescriptor:
    """Archive and upload a rendered app directory to the registry.

    ``local_dir`` is removed only after the registry confirms receipt; a
    failed upload never deletes local files.
    """
    local = Path(local_dir)
    if not local.is_dir():
        raise TemplateError(f"local app directory not found: {local}")
    if registry.org != organization:
        registry = RegistryLocation(registry.base, organization, registry.token)

    archive = archive_directory(local)
    client = RegistryClient(registry)
    _, url = client.push_archive("spaces", space_slug, archive)

    if delete_after_push:
        shutil.rmtree(local)

    return SpaceDescriptor(
        slug=space_slug,
        organization=organization,
        sdk=sdk,
        url=url,
        pushed_at=datetime.now(timezone.utc).isoformat(),
    )


def fetch_space_archive(
    space_slug: str, registry: RegistryLocation, version: int | None = None
) -> dict[str, bytes]:
    """Download a pushed space and return its files keyed by relative path."""
    client = RegistryClient(registry)
    if version is None:
        version = client.latest_version("spaces", space_slug)
    archive = client.fetch("spaces", registry.org, space_slug, version)
    out: dict[str, bytes] = {}
    with tarfile.open(fileobj=io.BytesIO(archive), mode="r:gz") as tar:
        for member in tar.getmembers():
            if member.isfile():
                out[member.name] = tar.extractfile(member).read()
    return out
