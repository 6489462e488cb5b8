import csv
import io
import json

from mppencode.encoding import DenseEncoding, SparseEncoding
from mppencode.exceptions import ParseError

# Integral values below this magnitude are written without a fractional part.
INTEGRAL_LIMIT = 1e16

ENCODING_FORMAT_VERSION = 1


def format_coordinate(value):
    """Shortest text that parses back to exactly ``value``.

    >>> format_coordinate(3.0)
    '3'
    >>> format_coordinate(0.1)
    '0.1'
    """
    value = float(value)
    if value.is_integer() and abs(value) < INTEGRAL_LIMIT:
        return str(int(value))
    return repr(value)


def encodings_to_csv(rows):
    """CSV text with one ``id, e0, ..., eN-1`` row per ``(id, encoding)``.

    :param rows: Iterable of ``(id, DenseEncoding)`` pairs.
    :rtype: ``str``
    """
    rows = list(rows)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    size = len(rows[0][1]) if rows else 0
    writer.writerow(["id"] + [f"e{i}" for i in range(size)])
    for ident, encoding in rows:
        writer.writerow([ident] + [format_coordinate(v) for v in encoding.values])
    return out.getvalue()


def read_encodings_csv(text, grid_id=None):
    """Parses :func:`encodings_to_csv` output.

    :param grid_id: Grid identifier attached to the returned encodings.
    :returns: List of ``(id, DenseEncoding)`` pairs.
    :raises ParseError: On a malformed row; the message names the row.
    """
    offset = 0
    rows = []
    size = None
    for number, line in enumerate(text.splitlines(keepends=True)):
        start = offset
        offset += len(line.encode("utf-8"))
        if not line.strip():
            continue
        fields = next(csv.reader([line]))
        if number == 0 and fields and fields[0] == "id":
            size = len(fields) - 1
            continue
        if size is not None and len(fields) - 1 != size:
            raise ParseError(
                start,
                f"row {number}: {len(fields) - 1} values",
                expected=f"{size} values",
            )
        try:
            values = [float(v) for v in fields[1:]]
        except ValueError as e:
            raise ParseError(start, f"row {number}: {e}", expected="numbers") from None
        size = len(values)
        rows.append((fields[0], DenseEncoding(values, grid_id)))
    return rows


def encodings_to_json(rows, grid, method, scale=None, sparse=False):
    """JSON document holding the grid description and one entry per
    encoding, dense (``values``) or sparse (``sparse``).

    :param rows: Iterable of ``(id, encoding)`` pairs; sparse documents take
                 :class:`~mppencode.encoding.SparseEncoding` values.
    :rtype: ``str``
    """
    entries = []
    for ident, encoding in rows:
        if sparse:
            entries.append(
                {
                    "id": ident,
                    "sparse": {
                        "length": encoding.length,
                        "indices": encoding.indices.tolist(),
                        "values": encoding.values.tolist(),
                    },
                }
            )
        else:
            entries.append({"id": ident, "values": encoding.values.tolist()})
    document = {
        "version": ENCODING_FORMAT_VERSION,
        "method": method,
        "scale": scale,
        "grid": grid.to_dict(),
        "encodings": entries,
    }
    return json.dumps(document, sort_keys=True, indent=1) + "\n"


def read_encodings_json(text):
    """Parses :func:`encodings_to_json` output.

    :returns: ``(document, rows)`` where ``rows`` holds ``(id, encoding)``
              pairs and ``document`` the remaining top-level fields.
    :raises ParseError: If the text is not such a document.
    """
    try:
        document = json.loads(text)
        grid_id = document["grid"]["grid_id"]
        rows = []
        for entry in document.pop("encodings"):
            if "sparse" in entry:
                s = entry["sparse"]
                encoding = SparseEncoding(
                    s["indices"], s["values"], s["length"], grid_id
                )
            else:
                encoding = DenseEncoding(entry["values"], grid_id)
            rows.append((entry["id"], encoding))
    except json.JSONDecodeError as e:
        raise ParseError(e.pos, e.msg) from None
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(0, f"not an encoding document: {e}") from None
    return document, rows
