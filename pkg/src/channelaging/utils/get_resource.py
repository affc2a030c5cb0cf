import os
import re


def resolve_uri(uri: str) -> str:
    """
    Map a config or drop-file location to a local path, existing or not.

    Accepts plain paths, ``file://`` and ``file:`` URIs and ``env:VAR``
    (the path is read from the environment variable ``VAR``).
    """
    if uri.startswith('file://'):
        return uri[7:]
    if uri.startswith('file:'):
        return uri[5:]
    if uri.startswith('env:'):
        name = uri[4:]
        if name not in os.environ:
            raise ValueError(f"Environment variable '{name}' for uri '{uri}' is not set")
        return os.environ[name]
    # anything that looks like a scheme is unsupported; a 2-char match is a windows drive
    m = re.match(r"^\w+\:", uri)
    if m is None or m.span()[1] == 2:
        return uri
    raise ValueError(f"Unsupported uri scheme in '{uri}'")


def get_resource(uri: str) -> str:
    path = resolve_uri(uri)
    if os.path.isfile(path):
        return path
    raise FileNotFoundError(f"Target path '{path}' for uri '{uri}' does not exist")
