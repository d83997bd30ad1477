// DOM layer: wires the upload input, crop selection, k control, and the
// result grid to a QuerySession. All ordering comes from the service.

import { SearchApi } from './api.js';
import { CropRect, cropImageToBlob, normalizeDrag } from './crop.js';
import { QuerySession } from './session.js';

interface LoadedImage {
  width: number;
  height: number;
  element: HTMLImageElement;
  objectUrl: string;
}

export function mountApp(root: HTMLElement, api: SearchApi): void {
  root.innerHTML = `
    <header>
      <h1>regiongem visual search</h1>
      <span id="health" class="muted"></span>
    </header>
    <section class="controls">
      <input type="file" id="file" accept="image/png,image/jpeg" />
      <label>k <input type="number" id="k" min="1" max="100" value="5" /></label>
      <button id="submit" disabled>search</button>
      <span id="crop-label" class="muted"></span>
    </section>
    <div id="error" class="banner" hidden></div>
    <div id="prefix-warning" class="banner warn" hidden></div>
    <section class="workspace">
      <div id="stage" class="stage"><p class="muted">upload a photo, then drag to crop the item</p></div>
      <div id="grid" class="grid"></div>
    </section>
  `;

  const fileInput = root.querySelector<HTMLInputElement>('#file')!;
  const kInput = root.querySelector<HTMLInputElement>('#k')!;
  const submitBtn = root.querySelector<HTMLButtonElement>('#submit')!;
  const stage = root.querySelector<HTMLDivElement>('#stage')!;
  const grid = root.querySelector<HTMLDivElement>('#grid')!;
  const errorBox = root.querySelector<HTMLDivElement>('#error')!;
  const prefixBox = root.querySelector<HTMLDivElement>('#prefix-warning')!;
  const cropLabel = root.querySelector<HTMLSpanElement>('#crop-label')!;
  const healthBox = root.querySelector<HTMLSpanElement>('#health')!;

  const session = new QuerySession<LoadedImage>(api, (source, rect) =>
    cropImageToBlob(source.element, rect),
  );

  api
    .health()
    .then((h) => {
      healthBox.textContent = `index: ${h.indexSize} items`;
    })
    .catch(() => {
      healthBox.textContent = 'service unreachable';
    });

  function refresh(): void {
    errorBox.hidden = !session.error;
    errorBox.textContent = session.error ?? '';
    prefixBox.hidden = !session.prefixWarning;
    prefixBox.textContent = session.prefixWarning ?? '';
    submitBtn.disabled = session.source === null || session.busy;
    if (session.crop) {
      const c = session.crop;
      cropLabel.textContent = `crop: ${c.width}x${c.height} at (${c.x}, ${c.y})`;
    }
    renderGrid();
  }

  function renderGrid(): void {
    grid.innerHTML = '';
    for (const [pos, card] of session.results.entries()) {
      const el = document.createElement('figure');
      el.className = 'card';
      el.innerHTML = `
        <img src="${api.resolveThumb(card.thumbnailUrl)}" alt="${card.imageId}" />
        <figcaption>
          <span class="rank">#${pos + 1}</span>
          <span class="label">${card.classLabel}</span>
          <span class="distance">${card.distance.toFixed(4)}</span>
        </figcaption>
      `;
      grid.appendChild(el);
    }
  }

  function showImage(img: LoadedImage): void {
    stage.innerHTML = '';
    img.element.className = 'source';
    img.element.draggable = false;
    stage.appendChild(img.element);
    const marquee = document.createElement('div');
    marquee.className = 'marquee';
    stage.appendChild(marquee);

    const scale = () => img.width / img.element.clientWidth;
    let dragStart: { x: number; y: number } | null = null;

    function stagePoint(ev: MouseEvent): { x: number; y: number } {
      const bounds = img.element.getBoundingClientRect();
      return {
        x: (ev.clientX - bounds.left) * scale(),
        y: (ev.clientY - bounds.top) * scale(),
      };
    }

    function paintMarquee(rect: CropRect): void {
      const s = 1 / scale();
      marquee.style.display = 'block';
      marquee.style.left = `${rect.x * s}px`;
      marquee.style.top = `${rect.y * s}px`;
      marquee.style.width = `${rect.width * s}px`;
      marquee.style.height = `${rect.height * s}px`;
    }

    stage.onmousedown = (ev) => {
      dragStart = stagePoint(ev);
    };
    stage.onmousemove = (ev) => {
      if (!dragStart) return;
      const point = stagePoint(ev);
      const rect = normalizeDrag(dragStart.x, dragStart.y, point.x, point.y, img);
      session.setCrop(rect);
      paintMarquee(rect);
      refresh();
    };
    stage.onmouseup = () => {
      dragStart = null;
    };
    if (session.crop) paintMarquee(session.crop);
  }

  fileInput.onchange = () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    const objectUrl = URL.createObjectURL(file);
    const element = new Image();
    element.onload = () => {
      const loaded: LoadedImage = {
        width: element.naturalWidth,
        height: element.naturalHeight,
        element,
        objectUrl,
      };
      session.setSource(loaded);
      showImage(loaded);
      refresh();
    };
    element.src = objectUrl;
  };

  submitBtn.onclick = async () => {
    refresh();
    await session.submit();
    refresh();
  };

  kInput.onchange = async () => {
    const k = Number(kInput.value);
    if (session.results.length > 0) {
      await session.adjustK(k);
    } else {
      session.setK(k);
    }
    refresh();
  };

  refresh();
}
