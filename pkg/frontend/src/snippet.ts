/**
 * Convert service snippet markers into semantic emphasis.
 *
 * The service delimits matched tokens with U+27E6/U+27E7 brackets and
 * stays markup-agnostic; the client owns the translation to <em>.
 */

const MARKED = /(⟦[^⟧]*⟧)/;

export function snippetToNodes(snippet: string, doc: Document): Node[] {
  const nodes: Node[] = [];
  for (const part of snippet.split(MARKED)) {
    if (part === "") continue;
    if (part.startsWith("⟦") && part.endsWith("⟧")) {
      const em = doc.createElement("em");
      em.textContent = part.slice(1, -1);
      nodes.push(em);
    } else {
      nodes.push(doc.createTextNode(part));
    }
  }
  return nodes;
}
