import json
import os
import re
from functools import wraps

from fathom.cli import parse_document
from fathom.fatgraph import AbstractGraph

INPUT_DIR = os.path.join(os.path.dirname(__file__), 'input')


def fixture_path(name:str) -> str:
    return os.path.join(INPUT_DIR, '%s.json' % name)


def load_fixture(name:str):
    with open(fixture_path(name)) as f:
        return parse_document(json.load(f))


### Test decorator methods

def with_fatgraph_file(path):
    """A decorator-generator, used to wrap test methods so that each method
    has a document read and parsed before it runs.

    A fatgraph document is available at `self.fg`, a graph document at
    `self.graph`. See `with_fatgraph`, below, for a shortcut that uses the
    test method's name to find the document.
    """
    def decorator(method):
        @wraps(method)
        def decorated(self, *args, **kwargs):
            with open(path) as f:
                item = parse_document(json.load(f))
            if isinstance(item, AbstractGraph):
                self.graph = item
            else:
                self.fg = item
            return method(self, *args, **kwargs)
        return decorated
    return decorator


def with_fatgraph(method):
    """A shortcut version of `with_fatgraph_file` that finds the document
    from the test method's name, with any leading `"test_"` removed."""
    return with_fatgraph_file(fixture_path(re.sub('^test_', '', method.__name__)))(method)
