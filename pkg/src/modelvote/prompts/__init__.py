"""Model-family prompt templates and rendering."""

from modelvote.prompts.templates import (
    PromptTemplate,
    RenderedPrompt,
    TemplateError,
    builtin_templates,
    instruction_variant,
    load_template,
    render_prompt,
    task_description_for,
    validate_template,
)

__all__ = [
    "PromptTemplate",
    "RenderedPrompt",
    "TemplateError",
    "builtin_templates",
    "instruction_variant",
    "load_template",
    "render_prompt",
    "task_description_for",
    "validate_template",
]
