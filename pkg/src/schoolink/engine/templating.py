"""
Schoolink Templating Engine

Jinja2 rendering of the packaged text artefacts: DOT graphs, the aligned
sweep table and the dendrogram merge list.
"""

from typing import Any, Dict, Optional

from jinja2 import (
    Environment,
    PackageLoader,
    StrictUndefined,
    TemplateNotFound,
    TemplateSyntaxError,
    UndefinedError,
)

from schoolink.engine.errors import TemplateError


def _filter_num(value: Any, digits: int = 4) -> str:
    """Fixed-point number, or the text as given."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return str(value)
    return f"{value:.{digits}f}"


def _filter_dot_id(value: Any) -> str:
    """Quote a string as a DOT identifier."""
    text = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{text}"'


def _filter_rgb(color: Any) -> str:
    r, g, b = color
    return f"#{int(r):02x}{int(g):02x}{int(b):02x}"


CUSTOM_FILTERS = {
    'num': _filter_num,
    'dot_id': _filter_dot_id,
    'rgb': _filter_rgb,
}


class TemplateEngine:
    """Loads templates from ``schoolink/templates`` with strict undefined handling."""

    def __init__(self) -> None:
        self.env = Environment(
            loader=PackageLoader("schoolink", "templates"),
            undefined=StrictUndefined,
            autoescape=False,
            keep_trailing_newline=True,
            trim_blocks=True,
            lstrip_blocks=True,
        )
        for name, func in CUSTOM_FILTERS.items():
            self.env.filters[name] = func

    def render(self, template_name: str, variables: Dict[str, Any]) -> str:
        """
        Render a packaged template.

        Raises:
            TemplateError: If the template is missing, invalid or references
                an undefined variable
        """
        try:
            return self.env.get_template(template_name).render(variables)
        except TemplateNotFound:
            raise TemplateError("Template not found", template=template_name) from None
        except UndefinedError as e:
            raise TemplateError(f"Undefined variable: {e}", template=template_name) from e
        except TemplateSyntaxError as e:
            raise TemplateError(f"Template syntax error: {e}", template=template_name) from e


_engine: Optional[TemplateEngine] = None


def get_template_engine() -> TemplateEngine:
    """Get the singleton template engine instance."""
    global _engine
    if _engine is None:
        _engine = TemplateEngine()
    return _engine


def render(template_name: str, variables: Dict[str, Any]) -> str:
    """Convenience function to render a packaged template."""
    return get_template_engine().render(template_name, variables)
