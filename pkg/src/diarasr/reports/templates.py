from typing import Dict, Optional

import jinja2

from ..utils.errors import ConfigError

SCORE_REPORT_TEMPLATE = """\
# {{ report.metric }} report

{% for key, value in report.parameters.items() %}
- {{ key }}: {{ value }}
{% endfor %}

## Sessions

| session | ref speakers | hyp speakers | {{ keys | join(" | ") }} | rate |
|---|---|---|{% for key in keys %}---|{% endfor %}---|
{% for s in report.sessions %}
| {{ s.session_id }} | {{ s.num_ref_speakers }} | {{ s.num_hyp_speakers }} | {% for key in keys %}{{ s.counts[key] | number }} | {% endfor %}{{ s.rate | rate }} |
{% endfor %}

## Aggregate

- sessions: {{ report.aggregate.sessions }}
{% for key in keys %}
- {{ key }}: {{ report.aggregate.counts[key] | number }}
{% endfor %}
- rate: {{ report.aggregate.rate | rate }}
{% if report.by_num_speakers is not none %}

## By number of speakers

| speakers | sessions | {{ keys | join(" | ") }} | rate |
|---|---|{% for key in keys %}---|{% endfor %}---|
{% for row in report.by_num_speakers %}
| {{ row.num_speakers }} | {{ row.sessions }} | {% for key in keys %}{{ row.counts[key] | number }} | {% endfor %}{{ row.rate | rate }} |
{% endfor %}
{% endif %}
"""


def format_number(value) -> str:
    if isinstance(value, int):
        return str(value)
    return f"{value:.3f}"


def format_rate(value: Optional[float]) -> str:
    return "undefined" if value is None else f"{100.0 * value:.2f}%"


class TemplateManager:
    def __init__(self):
        self.env = jinja2.Environment(trim_blocks=True, lstrip_blocks=True, autoescape=False)
        self.env.filters["number"] = format_number
        self.env.filters["rate"] = format_rate
        self.templates = {
            "score_report": self.env.from_string(SCORE_REPORT_TEMPLATE),
        }

    def render_template(self, template_name: str, data: Dict) -> str:
        if template_name not in self.templates:
            raise ConfigError(f"template {template_name} not found")
        return self.templates[template_name].render(**data)
