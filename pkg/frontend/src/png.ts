/** SVG-to-PNG rasterization. */

import { Resvg } from "@resvg/resvg-js";

export function renderPng(svg: string): Buffer {
  const renderer = new Resvg(svg, {
    fitTo: { mode: "width", value: 1520 },
    background: "#ffffff",
  });
  return renderer.render().asPng();
}
