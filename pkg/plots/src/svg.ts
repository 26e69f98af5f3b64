/** Tiny deterministic SVG string builder.
 *
 * Rendering must be byte-identical for identical inputs, so every number
 * goes through the fixed-precision formatters below and no element ever
 * depends on time, locale, or randomness.
 */

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Pixel coordinate: two decimals, trailing zeros stripped. */
export function px(n: number): string {
  const s = n.toFixed(2).replace(/\.?0+$/, "");
  return s === "-0" ? "0" : s;
}

/** Data value for labels/ticks: up to three decimals, trailing zeros stripped. */
export function fmt(n: number): string {
  if (Number.isInteger(n)) {
    return String(n);
  }
  const s = n.toFixed(3).replace(/\.?0+$/, "");
  return s === "-0" ? "0" : s;
}

export type AttrValue = string | number;

/** One SVG element; numeric attribute values are formatted as pixels. */
export function tag(
  name: string,
  attrs: Record<string, AttrValue>,
  content?: string,
): string {
  const parts = Object.entries(attrs).map(
    ([key, value]) => `${key}="${typeof value === "number" ? px(value) : esc(value)}"`,
  );
  const open = `<${name}${parts.length ? " " + parts.join(" ") : ""}`;
  return content === undefined ? `${open}/>` : `${open}>${content}</${name}>`;
}

export function textEl(
  x: number,
  y: number,
  content: string,
  attrs: Record<string, AttrValue> = {},
): string {
  return tag("text", { x, y, ...attrs }, esc(content));
}

export function svgDocument(width: number, height: number, body: string[]): string {
  const open = tag("svg", {
    xmlns: "http://www.w3.org/2000/svg",
    width,
    height,
    viewBox: `0 0 ${width} ${height}`,
    "font-family": "sans-serif",
  }).replace(/\/>$/, ">");
  return [open, ...body, "</svg>", ""].join("\n");
}
