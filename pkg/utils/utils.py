# utils.py
import json
import logging
import textwrap
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Any, Callable, Iterable, List, Optional, TypeVar

from tabulate import tabulate
from tqdm import tqdm

from utils.errors import MalformedInputError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# Longest nested JSON value shown inline by the --pretty renderer
PRETTY_CELL_WIDTH = 100


def wrap_text(text, width=PRETTY_CELL_WIDTH):
    """Helper function to wrap text for better readability."""
    return "\n".join(textwrap.wrap(str(text), width))


def load_json_file(file_path: Path) -> Any:
    """
    Load a JSON document.

    Raises:
        MalformedInputError: If the file is missing or is not valid JSON
    """
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise MalformedInputError(f"File '{file_path}' not found.")
    except json.JSONDecodeError as decode_error:
        raise MalformedInputError(f"Could not decode JSON from '{file_path}': {decode_error}")


def save_json_file(data: Any, file_path: Path) -> bool:
    """Save data to JSON file with error handling."""
    try:
        Path(file_path).parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2)
        return True
    except OSError as e:
        logger.error("Error saving to '%s': %s", file_path, e)
        return False


def parse_int_list(text: str, name: str = "value") -> List[int]:
    """Parse a comma separated list of integers such as '3,5,7' or '-1,0'."""
    if text is None or text.strip() == "":
        return []
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise MalformedInputError(f"{name} must be a comma separated list of integers, got {text!r}")


def parse_label_list(text: Optional[str]) -> List[str]:
    if not text:
        return []
    return [part.strip() for part in text.split(",") if part.strip()]


def parallel_map(
    func: Callable[[T], R],
    items: Iterable[T],
    threads: int = 1,
    description: Optional[str] = None,
) -> List[R]:
    """
    Apply func to every item, optionally on a thread pool.

    Results come back in input order whatever the completion order, so output
    does not depend on the worker count. Exceptions from a task propagate.

    Args:
        func: Pure function applied to each item
        items: Work items
        threads: Worker count; 1 runs inline
        description: Progress bar label

    Returns:
        List[R]: func(item) for each item, in order
    """
    work = list(items)
    results: List[Any] = [None] * len(work)
    if threads <= 1 or len(work) <= 1:
        for index, item in enumerate(tqdm(work, desc=description, disable=None, leave=False)):
            results[index] = func(item)
        return results

    with ThreadPoolExecutor(max_workers=threads) as executor:
        future_to_index = {executor.submit(func, item): index for index, item in enumerate(work)}
        with tqdm(total=len(work), desc=description, disable=None, leave=False) as progress_bar:
            for completed_future in as_completed(future_to_index):
                results[future_to_index[completed_future]] = completed_future.result()
                progress_bar.update(1)
    return results


def _cell(value: Any) -> str:
    if isinstance(value, (dict, list)):
        text = json.dumps(value)
        if len(text) > PRETTY_CELL_WIDTH:
            return text[: PRETTY_CELL_WIDTH - 3] + "..."
        return text
    return wrap_text(value)


def render_pretty(result: dict) -> str:
    """Human readable rendering of a CommandResult using tabulate."""
    header = f"{' '.join(result.get('command', []))}  [{result.get('status')}]"
    payload = result.get("payload")
    if isinstance(payload, list) and payload and all(isinstance(row, dict) for row in payload):
        rows = [{key: _cell(value) for key, value in row.items()} for row in payload]
        body = tabulate(rows, headers="keys", tablefmt="github")
    elif isinstance(payload, dict):
        body = tabulate([(key, _cell(value)) for key, value in payload.items()], headers=["field", "value"],
                        tablefmt="github")
    else:
        body = _cell(payload)
    return f"{header}\n{body}"
