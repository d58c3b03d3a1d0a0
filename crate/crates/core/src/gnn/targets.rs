use super::ModelError;

/// Node labels with train/validation/test masks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledTargets {
    labels: Vec<usize>,
    train_mask: Vec<bool>,
    val_mask: Vec<bool>,
    test_mask: Vec<bool>,
    num_classes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Val,
    Test,
}

impl LabeledTargets {
    pub fn new(
        labels: Vec<usize>,
        train_mask: Vec<bool>,
        val_mask: Vec<bool>,
        test_mask: Vec<bool>,
        num_classes: usize,
    ) -> Result<Self, ModelError> {
        let n = labels.len();
        for (name, m) in [("train", &train_mask), ("val", &val_mask), ("test", &test_mask)] {
            if m.len() != n {
                return Err(ModelError::Targets(format!(
                    "{name} mask has length {}, expected {n}",
                    m.len()
                )));
            }
        }
        for i in 0..n {
            let hits = [train_mask[i], val_mask[i], test_mask[i]]
                .iter()
                .filter(|&&b| b)
                .count();
            if hits > 1 {
                return Err(ModelError::Targets(format!("node {i} is in more than one mask")));
            }
            if labels[i] >= num_classes {
                return Err(ModelError::Targets(format!(
                    "node {i} has label {} but there are {num_classes} classes",
                    labels[i]
                )));
            }
        }
        Ok(Self {
            labels,
            train_mask,
            val_mask,
            test_mask,
            num_classes,
        })
    }

    /// Every node labeled, no node in any split.
    pub fn unsplit(labels: Vec<usize>, num_classes: usize) -> Result<Self, ModelError> {
        let n = labels.len();
        Self::new(labels, vec![false; n], vec![false; n], vec![false; n], num_classes)
    }

    pub fn with_masks(
        &self,
        train_mask: Vec<bool>,
        val_mask: Vec<bool>,
        test_mask: Vec<bool>,
    ) -> Result<Self, ModelError> {
        Self::new(self.labels.clone(), train_mask, val_mask, test_mask, self.num_classes)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn mask(&self, split: Split) -> &[bool] {
        match split {
            Split::Train => &self.train_mask,
            Split::Val => &self.val_mask,
            Split::Test => &self.test_mask,
        }
    }

    pub fn count(&self, split: Split) -> usize {
        self.mask(split).iter().filter(|&&b| b).count()
    }
}
