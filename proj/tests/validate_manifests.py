"""Validate every manifest.json below a directory against the manifest schema."""
import json
import pathlib
import sys

import jsonschema


def main() -> int:
    schema = json.loads(pathlib.Path(sys.argv[1]).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    found = sorted(pathlib.Path(sys.argv[2]).rglob("manifest.json"))
    if not found:
        print("no manifests found", file=sys.stderr)
        return 1
    bad = 0
    for path in found:
        errors = list(validator.iter_errors(json.loads(path.read_text())))
        for e in errors:
            print(f"{path}: {'/'.join(map(str, e.path))}: {e.message}", file=sys.stderr)
        bad += bool(errors)
    print(f"{len(found) - bad}/{len(found)} manifests valid")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
