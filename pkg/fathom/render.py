"""Static reports of a fatgraph's invariants.

A report is a list of sections, each a block of documentation written in
[Markdown][markdown] next to a block of JSON highlighted by
[Pygments][pygments]. HTML reports are laid out by a [Mustache][mustache]
template rendered with [Pystache][pystache]; Markdown reports weld the
sections together with fenced code blocks instead.

[markdown]: http://daringfireball.net/projects/markdown/
[pygments]: http://pygments.org/
[mustache]: http://mustache.github.com/
[pystache]: https://github.com/defunkt/pystache
"""

import datetime
import json
import logging
import os
import shutil

import markdown
import pystache
from pygments import highlight
from pygments.formatters import HtmlFormatter
from pygments.lexers import JsonLexer

from . import laurent
from .fatgraph import Fatgraph
from .homology import euler, poincare

log = logging.getLogger(__name__)

FATHOM_ROOT = os.path.dirname(__file__)
FATHOM_RESOURCES = os.path.join(FATHOM_ROOT, 'resources')
FATHOM_TEMPLATE = os.path.join(FATHOM_RESOURCES, 'template.html')
FATHOM_CSS = os.path.join(FATHOM_RESOURCES, 'fathom.css')


def version() -> str:
    from . import __version__
    return __version__


### Sections

def _summary(fg:Fatgraph) -> dict:
    st = fg.state(fg.full_mask)
    return {'v': st.v, 'e': st.e, 'k': st.k, 'p': st.p, 'genus': st.g, 'signs': ''.join(fg.signs)}


def _polynomial_rows(fg:Fatgraph) -> list:
    return [('Z(F,q)', laurent.z_poly(fg)), ('Z̃(F,q)', laurent.z_tilde(fg)),
            ('R̂(F,q)', laurent.restricted_br(fg)), ("R'(F,q,r,s)", laurent.r_prime_signed(fg)),
            ('B(F,q,r)', laurent.b_poly(fg)), ('M(G,1+r)', laurent.hgr_poly(fg.underlying_graph()))]


def sections(name:str, fg:Fatgraph, tables:dict) -> list:
    """`(docs, code)` pairs: Markdown text and the JSON it describes."""
    summary = _summary(fg)
    result = [(
        '# %s\n\nA fatgraph with %d vertices and %d edges, %d boundary circles and genus %d.'
        % (name, summary['v'], summary['e'], summary['p'], summary['genus']),
        fg.to_document(),
    )]
    lines = ['## Polynomials', '', '| polynomial | value |', '|---|---|']
    lines += ['| %s | `%s` |' % (label, poly) for label, poly in _polynomial_rows(fg)]
    result.append(('\n'.join(lines), summary))
    for family, table in sorted(tables.items()):
        docs = ('## %s homology\n\nPoincaré polynomial `%s`, graded Euler characteristic `%s`%s.'
                % (family.capitalize(), poincare(table), euler(table),
                   ', with torsion' if table.has_torsion() else ''))
        result.append((docs, table.to_json()['groups']))
    return result


### Preprocessors

def preprocess_docs(docs:str, raw:bool = False) -> str:
    if raw:
        return docs
    return markdown.markdown(docs, extensions=['tables'])


def preprocess_code(data, raw:bool = False) -> str:
    text = json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)
    if raw:
        return '```json\n%s\n```\n' % text
    return highlight(text, JsonLexer(), HtmlFormatter())


### Rendering

def report(name:str, fg:Fatgraph, tables:dict, markdown_only:bool = False) -> str:
    """Render the report for `fg` as HTML, or as Markdown with
    `markdown_only`."""
    parts = [{
        'num': num,
        'docs_html': preprocess_docs(docs, markdown_only),
        'code_html': preprocess_code(code, markdown_only),
    } for num, (docs, code) in enumerate(sections(name, fg, tables))]
    if markdown_only:
        return '\n'.join('%s\n\n%s' % (part['docs_html'], part['code_html']) for part in parts)
    context = {
        'title': name,
        'sections': parts,
        'date': datetime.datetime.now(datetime.timezone.utc).strftime('%d %b %Y'),
        'version': version(),
    }
    with open(FATHOM_TEMPLATE) as f:
        return pystache.render(f.read(), context)


def write_report(output_dir:str, name:str, body:str, markdown_only:bool = False) -> str:
    """Write `body` into `output_dir` (created if necessary) next to the
    stylesheet and return its path."""
    if not os.path.isdir(output_dir):
        os.makedirs(output_dir)
    path = os.path.join(output_dir, '%s.%s' % (name, 'md' if markdown_only else 'html'))
    with open(path, 'w') as f:
        f.write(body)
    if not markdown_only:
        shutil.copy(FATHOM_CSS, output_dir)
    log.info('wrote %s', path)
    return path
